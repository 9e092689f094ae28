use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

/// Simulation events. The derive order of the variants is irrelevant; tie
/// priority comes from [`Event::priority`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Event {
    LaaDeparture,
    WifiDeparture,
    /// Expiry of the phase timer armed at the given epoch.
    PhaseExpire(u64),
    FastStart(u64),
    LaaArrival,
    WifiArrival,
}

impl Event {
    /// Same-time ties: departures, then phase expiries, then fast start,
    /// then arrivals.
    fn priority(self) -> u8 {
        match self {
            Event::LaaDeparture | Event::WifiDeparture => 0,
            Event::PhaseExpire(_) => 1,
            Event::FastStart(_) => 2,
            Event::LaaArrival | Event::WifiArrival => 3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Scheduled {
    pub time: f64,
    pub event: Event,
    seq: u64,
}

impl Scheduled {
    fn key(&self) -> (f64, u8, u64) {
        (self.time, self.event.priority(), self.seq)
    }
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        let (ta, pa, sa) = self.key();
        let (tb, pb, sb) = other.key();
        tb.total_cmp(&ta).then(pb.cmp(&pa)).then(sb.cmp(&sa))
    }
}

#[derive(Debug, Default)]
pub(crate) struct Calendar {
    heap: BinaryHeap<Scheduled>,
    seq: u64,
}

impl Calendar {
    pub fn schedule(&mut self, time: f64, event: Event) {
        self.heap.push(Scheduled {
            time,
            event,
            seq: self.seq,
        });
        self.seq += 1;
    }

    pub fn pop(&mut self) -> Option<Scheduled> {
        self.heap.pop()
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.heap.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn ordering_and_ties() {
        let mut c = Calendar::default();
        c.schedule(2.0, Event::LaaArrival);
        c.schedule(1.0, Event::WifiArrival);
        c.schedule(1.0, Event::FastStart(0));
        c.schedule(1.0, Event::PhaseExpire(0));
        c.schedule(1.0, Event::WifiDeparture);
        c.schedule(1.0, Event::LaaDeparture);
        c.schedule(0.5, Event::LaaArrival);
        assert_eq!(c.len(), 7);
        let order: Vec<_> = core::iter::from_fn(|| c.pop())
            .map(|s| (s.time, s.event))
            .collect();
        assert_eq!(
            order,
            [
                (0.5, Event::LaaArrival),
                (1.0, Event::WifiDeparture),
                (1.0, Event::LaaDeparture),
                (1.0, Event::PhaseExpire(0)),
                (1.0, Event::FastStart(0)),
                (1.0, Event::WifiArrival),
                (2.0, Event::LaaArrival),
            ]
        );
    }
}

use super::ModelError;

/// How the queue-threshold test of the phase controller compares `z`
/// against `Q_θ`. A sensing controller whose activation test fails falls
/// back to OFF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdMode {
    /// Activation on `z > Q_θ`.
    Strict,
    /// Activation on `z ≥ Q_θ`.
    #[default]
    NonStrict,
}

/// Which channel condition sends a sensing controller back to OFF (besides
/// the queue falling below the threshold).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SenseRelease {
    /// Channel held by Wi-Fi only: `x = 0, y ≥ 1`.
    #[default]
    WifiHeld,
    /// Channel held by anyone: `x + y > 0`.
    ChannelBusy,
    /// Only the threshold test releases the controller.
    ThresholdOnly,
}

/// Rates (1/s), capacities and variant switches of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda_laa: f64,
    pub lambda_wifi: f64,
    pub mu_laa: f64,
    pub mu_wifi: f64,
    pub mu_sense: f64,
    pub mu_on: f64,
    pub mu_off: f64,
    /// `μ_on' = fast_start_multiplier · μ_on`.
    pub fast_start_multiplier: f64,
    /// Unlicensed servers `D`. Only `D = 1` has reference values.
    pub servers: u32,
    /// Queue capacity `Q`.
    pub queue_capacity: u32,
    /// Buffer threshold `Q_θ`.
    pub queue_threshold: u32,
    pub lbt_enabled: bool,
    pub buffering_enabled: bool,
    pub threshold_mode: ThresholdMode,
    pub sense_release: SenseRelease,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::table1(25.0)
    }
}

impl ModelParams {
    /// LBT with buffering: `E[t_w] = 1/40`, `E[t_ℓ,u] = 1/25`,
    /// `E[t_on] = E[t_off] = 10`, `E[t_s] = 1`, `λ_w = 5`, `D = 1`,
    /// `Q = Q_θ = 2`.
    pub fn table1(lambda_laa: f64) -> Self {
        ModelParams {
            lambda_laa,
            lambda_wifi: 5.0,
            mu_laa: 25.0,
            mu_wifi: 40.0,
            mu_sense: 1.0,
            mu_on: 0.1,
            mu_off: 0.1,
            fast_start_multiplier: 10.0,
            servers: 1,
            queue_capacity: 2,
            queue_threshold: 2,
            lbt_enabled: true,
            buffering_enabled: true,
            threshold_mode: ThresholdMode::NonStrict,
            sense_release: SenseRelease::WifiHeld,
        }
    }

    /// Same traffic as [`ModelParams::table1`] with the LAA cell always ON.
    pub fn table2(lambda_laa: f64) -> Self {
        ModelParams {
            lbt_enabled: false,
            ..ModelParams::table1(lambda_laa)
        }
    }

    /// Queue-size sweep operating point with `μ_w` normalised to 1:
    /// `λ_ℓ = λ_w = 0.5`, `μ_ℓ,u = μ_s = 1`, `μ_on = μ_off = 0.1`,
    /// `Q_θ = 2`.
    pub fn sweep_point(queue_capacity: u32, lbt_enabled: bool, buffering_enabled: bool) -> Self {
        ModelParams {
            lambda_laa: 0.5,
            lambda_wifi: 0.5,
            mu_laa: 1.0,
            mu_wifi: 1.0,
            mu_sense: 1.0,
            mu_on: 0.1,
            mu_off: 0.1,
            queue_capacity,
            queue_threshold: 2.min(queue_capacity),
            lbt_enabled,
            buffering_enabled,
            ..ModelParams::table1(0.5)
        }
    }

    /// Queue capacity actually available: `Q` with buffering, else 0.
    pub fn effective_queue(&self) -> u32 {
        if self.buffering_enabled {
            self.queue_capacity
        } else {
            0
        }
    }

    /// Threshold used by the phase gates. Without buffering there is no
    /// queue to fill, so the controller behaves as if `Q_θ = 0`.
    pub fn effective_threshold(&self) -> u32 {
        if self.buffering_enabled {
            self.queue_threshold
        } else {
            0
        }
    }

    pub fn fast_start_rate(&self) -> f64 {
        self.fast_start_multiplier * self.mu_on
    }

    /// Queue level passes the activation test (OFF→sensing, sensing→ON).
    pub fn activation_passes(&self, queued: u32) -> bool {
        let th = self.effective_threshold();
        match self.threshold_mode {
            ThresholdMode::Strict => queued > th,
            ThresholdMode::NonStrict => queued >= th,
        }
    }

    /// Queue level sends a sensing controller back to OFF. This is the
    /// complement of the activation test in both modes.
    pub fn deactivation_passes(&self, queued: u32) -> bool {
        !self.activation_passes(queued)
    }

    /// Returns a copy with every rate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ModelParams {
            lambda_laa: self.lambda_laa * factor,
            lambda_wifi: self.lambda_wifi * factor,
            mu_laa: self.mu_laa * factor,
            mu_wifi: self.mu_wifi * factor,
            mu_sense: self.mu_sense * factor,
            mu_on: self.mu_on * factor,
            mu_off: self.mu_off * factor,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        fn arrival(name: &'static str, v: f64) -> Result<(), ModelError> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidParam {
                    name,
                    reason: "must be finite and non-negative",
                })
            }
        }
        fn positive(name: &'static str, v: f64) -> Result<(), ModelError> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidParam {
                    name,
                    reason: "must be finite and positive",
                })
            }
        }
        arrival("lambda_laa", self.lambda_laa)?;
        arrival("lambda_wifi", self.lambda_wifi)?;
        positive("mu_laa", self.mu_laa)?;
        positive("mu_wifi", self.mu_wifi)?;
        positive("mu_sense", self.mu_sense)?;
        positive("mu_on", self.mu_on)?;
        positive("mu_off", self.mu_off)?;
        positive("fast_start_multiplier", self.fast_start_multiplier)?;
        if self.servers == 0 {
            return Err(ModelError::InvalidParam {
                name: "D",
                reason: "at least one server is required",
            });
        }
        if self.queue_threshold > self.queue_capacity {
            return Err(ModelError::InvalidParam {
                name: "Q_theta",
                reason: "threshold must not exceed the queue capacity",
            });
        }
        Ok(())
    }
}

use serde::{Deserialize, Serialize};

use super::channel::DEFAULT_OSCILLATORS;
use super::SignalError;

/// System parameters of the simulated uplink.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of users `K`; user 0 is the desired user.
    pub users: usize,
    /// Chips per symbol `N`.
    pub spreading_gain: usize,
    /// Upper bound `L` on the channel length in chips.
    pub max_paths: usize,
    /// Antenna elements `J` of the half-wavelength ULA.
    pub antennas: usize,
    pub ebn0_db: f64,
    /// Normalized Doppler `f_d T` in cycles per symbol.
    pub fdt: f64,
    /// Standard deviation of the log-normal interferer powers, in dB.
    pub power_std_db: f64,
    /// Relative path powers in dB; one active path per entry.
    pub delay_profile_db: Vec<f64>,
    /// Sinusoids per path in the Clarke generator.
    pub oscillators: usize,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            users: 8,
            spreading_gain: 16,
            max_paths: 9,
            antennas: 1,
            ebn0_db: 15.0,
            fdt: 1e-4,
            power_std_db: 1.5,
            delay_profile_db: vec![0.0, -3.0, -6.0],
            oscillators: DEFAULT_OSCILLATORS,
        }
    }
}

impl SystemConfig {
    /// Chips per antenna in one observation window.
    pub fn window(&self) -> usize {
        self.spreading_gain + self.max_paths - 1
    }

    /// Received vector length `JM`.
    pub fn dim(&self) -> usize {
        self.antennas * self.window()
    }

    pub fn active_paths(&self) -> usize {
        self.delay_profile_db.len()
    }

    pub fn validate(&self) -> Result<(), SignalError> {
        let fail = |msg: String| Err(SignalError::Config(msg));
        if self.users == 0 {
            return fail("at least one user is required".into());
        }
        if self.antennas == 0 {
            return fail("at least one antenna is required".into());
        }
        if self.spreading_gain == 0 || self.max_paths == 0 {
            return fail("spreading gain and path bound must be positive".into());
        }
        if self.max_paths > self.spreading_gain {
            return fail(format!(
                "path bound L = {} exceeds spreading gain N = {}",
                self.max_paths, self.spreading_gain
            ));
        }
        if self.delay_profile_db.is_empty() {
            return fail("delay profile needs at least one path".into());
        }
        // Path spacings are 1 or 2 chips, so the last delay can reach 2(P-1).
        let worst_delay = 2 * (self.active_paths() - 1);
        if worst_delay > self.max_paths - 1 {
            return fail(format!(
                "{} active paths can reach delay {} chips, beyond L - 1 = {}",
                self.active_paths(),
                worst_delay,
                self.max_paths - 1
            ));
        }
        if !(self.fdt >= 0.0) || !self.ebn0_db.is_finite() || !(self.power_std_db >= 0.0) {
            return fail("fdT and power spread must be non-negative, Eb/N0 finite".into());
        }
        if self.oscillators == 0 {
            return fail("Clarke generator needs at least one oscillator".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_dimensions() {
        let c = SystemConfig::default();
        assert_eq!(c.window(), 24);
        assert_eq!(c.dim(), 24);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_path_bound_above_spreading_gain() {
        let c = SystemConfig { spreading_gain: 4, max_paths: 5, ..Default::default() };
        assert!(matches!(c.validate(), Err(SignalError::Config(_))));
    }
}

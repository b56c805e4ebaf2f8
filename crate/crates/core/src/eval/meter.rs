use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    /// Wall and thread CPU clocks.
    #[default]
    Measured,
    /// All timing fields zero, for byte-reproducible output.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeterConfig {
    pub cpu_power_w: f64,
    pub carbon_intensity_g_per_kwh: f64,
    pub timing: Timing,
}

impl Default for MeterConfig {
    fn default() -> Self {
        Self {
            cpu_power_w: 100.0,
            carbon_intensity_g_per_kwh: 475.0,
            timing: Timing::Measured,
        }
    }
}

impl MeterConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.cpu_power_w >= 0.0) || !(self.carbon_intensity_g_per_kwh >= 0.0) {
            return Err("cpu_power_w and carbon_intensity_g_per_kwh must be non-negative".into());
        }
        Ok(())
    }

    pub fn energy_wh(&self, cpu_s: f64) -> f64 {
        cpu_s * self.cpu_power_w / 3600.0
    }

    pub fn co2_g(&self, energy_wh: f64) -> f64 {
        energy_wh * self.carbon_intensity_g_per_kwh / 1000.0
    }

    /// Measurement for a known CPU time.
    pub fn account(&self, wall_s: f64, cpu_s: f64) -> Measurement {
        let energy_wh = self.energy_wh(cpu_s);
        Measurement {
            wall_s,
            cpu_s,
            energy_wh,
            co2_g: self.co2_g(energy_wh),
            cpu_clock_missing: false,
        }
    }

    /// Runs `f` and meters it on the calling thread.
    pub fn meter<T>(&self, f: impl FnOnce() -> T) -> (T, Measurement) {
        if self.timing == Timing::Off {
            return (f(), Measurement::default());
        }
        let cpu0 = thread_cpu_seconds();
        let t0 = Instant::now();
        let out = f();
        let wall_s = t0.elapsed().as_secs_f64();
        let m = match (cpu0, thread_cpu_seconds()) {
            (Some(a), Some(b)) => self.account(wall_s, (b - a).max(0.0)),
            _ => Measurement {
                wall_s,
                cpu_clock_missing: true,
                ..Measurement::default()
            },
        };
        (out, m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Measurement {
    pub wall_s: f64,
    pub cpu_s: f64,
    pub energy_wh: f64,
    pub co2_g: f64,
    /// Set when the thread CPU clock could not be read; energy is then zero.
    pub cpu_clock_missing: bool,
}

impl std::ops::Add for Measurement {
    type Output = Measurement;

    fn add(self, o: Measurement) -> Measurement {
        Measurement {
            wall_s: self.wall_s + o.wall_s,
            cpu_s: self.cpu_s + o.cpu_s,
            energy_wh: self.energy_wh + o.energy_wh,
            co2_g: self.co2_g + o.co2_g,
            cpu_clock_missing: self.cpu_clock_missing || o.cpu_clock_missing,
        }
    }
}

fn thread_cpu_seconds() -> Option<f64> {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid, writable timespec for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    (rc == 0).then(|| ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hour_at_100w() {
        let cfg = MeterConfig {
            cpu_power_w: 100.0,
            carbon_intensity_g_per_kwh: 50.0,
            ..MeterConfig::default()
        };
        let m = cfg.account(3600.0, 3600.0);
        assert_eq!(m.energy_wh, 100.0);
        assert_eq!(m.co2_g, 5.0);
    }

    #[test]
    fn empty_block_and_monotonicity() {
        let cfg = MeterConfig::default();
        let ((), m) = cfg.meter(|| ());
        assert!(m.wall_s < 0.01 && m.cpu_s < 0.01);
        assert_eq!(cfg.account(0.0, 0.0).co2_g, 0.0);
        let mut prev = -1.0;
        for s in [0.0, 0.5, 1.0, 10.0, 1e4] {
            let c = cfg.account(s, s).co2_g;
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn busy_block_uses_cpu() {
        let cfg = MeterConfig::default();
        let (x, m) = cfg.meter(|| (0..3_000_000u64).map(|i| (i as f64).sqrt()).sum::<f64>());
        assert!(x > 0.0);
        assert!(m.cpu_s > 0.0 && m.energy_wh > 0.0);
        let (_, off) = MeterConfig { timing: Timing::Off, ..cfg }.meter(|| 1);
        assert_eq!(off, Measurement::default());
    }
}

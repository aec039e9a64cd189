use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sweep parameters. The couplings follow J = R, Bx = B₀ − R.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub b0: f64,
    pub r0: f64,
    pub vbar: f64,
    pub tff: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            b0: 10.0,
            r0: 0.0,
            vbar: 100.0,
            tff: 0.1,
        }
    }
}

impl Schedule {
    pub fn new(b0: f64, r0: f64, vbar: f64, tff: f64) -> Result<Self> {
        let s = Schedule { b0, r0, vbar, tff };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSchedule(msg));
        if ![self.b0, self.r0, self.vbar, self.tff].iter().all(|x| x.is_finite()) {
            return bad("parameters must be finite".into());
        }
        if self.tff <= 0.0 {
            return bad(format!("tff must be positive, got {}", self.tff));
        }
        if self.vbar < 0.0 {
            return bad(format!("vbar must be non-negative, got {}", self.vbar));
        }
        if self.b0 <= 0.0 {
            return bad(format!("b0 must be positive, got {}", self.b0));
        }
        Ok(())
    }

    pub fn couplings(&self, r: f64) -> (f64, f64) {
        (r, self.b0 - r)
    }

    /// (∂J/∂R, ∂Bx/∂R).
    pub fn coupling_rates(&self) -> (f64, f64) {
        (1.0, -1.0)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.tff).contains(&t) {
            return Err(Error::TimeOutOfRange { t, tff: self.tff });
        }
        Ok(())
    }

    /// sin and cos of 2πt/T_FF, exact at both ends of the window.
    fn phase(&self, t: f64) -> (f64, f64) {
        if t == 0.0 || t == self.tff {
            (0.0, 1.0)
        } else {
            (2.0 * PI * t / self.tff).sin_cos()
        }
    }

    /// v(t) = v̄(1 − cos 2πt/T_FF).
    pub fn velocity(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.vbar * (1.0 - self.phase(t).1))
    }

    /// R(Λ(t)) = R₀ + v̄(t − T_FF/2π · sin 2πt/T_FF).
    pub fn advanced_r(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.r0 + self.vbar * (t - self.tff / (2.0 * PI) * self.phase(t).0))
    }

    pub fn final_r(&self) -> f64 {
        self.r0 + self.vbar * self.tff
    }

    /// Uniform time grid t_k = T_FF·k/steps, k = 0..=steps.
    pub fn time(&self, k: usize, steps: usize) -> f64 {
        if k == steps {
            self.tff
        } else {
            self.tff * k as f64 / steps as f64
        }
    }
}

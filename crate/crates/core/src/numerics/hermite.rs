use crate::error::{invalid, Error, Result};

const MAX_ORDER: usize = 10_000;
const RESCALE: f64 = 1e150;

/// Streams the orthonormal Hermite functions `φ₀(x), φ₁(x), …` by the
/// normalized three-term recurrence
/// `φ_{n+1} = x √(2/(n+1)) φ_n − √(n/(n+1)) φ_{n−1}`.
///
/// Where `φ₀ = π^{-1/4} e^{-x²/2}` would underflow, the pair is carried as a
/// mantissa and a natural-log scale and folded back once representable, so
/// neither overflow nor spurious underflow occurs.
#[derive(Debug, Clone)]
pub struct HermiteSweep {
    x: f64,
    n: usize,
    prev: f64,
    cur: f64,
    log_scale: f64,
}

impl HermiteSweep {
    pub fn new(x: f64) -> Self {
        // ln π^{-1/4}
        let log_phi0 = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
        let (cur, log_scale) = if log_phi0 > -700.0 {
            (log_phi0.exp(), 0.0)
        } else {
            (1.0, log_phi0)
        };
        Self {
            x,
            n: 0,
            prev: 0.0,
            cur,
            log_scale,
        }
    }

    /// Index of the function the next call to `next` yields.
    pub fn order(&self) -> usize {
        self.n
    }

    fn value(&self) -> f64 {
        if self.log_scale == 0.0 {
            self.cur
        } else if self.cur == 0.0 {
            0.0
        } else {
            (self.cur.abs().ln() + self.log_scale).exp().copysign(self.cur)
        }
    }

    fn advance(&mut self) {
        let nf = self.n as f64;
        let next = self.x * (2.0 / (nf + 1.0)).sqrt() * self.cur - (nf / (nf + 1.0)).sqrt() * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        if self.cur.abs() > RESCALE {
            self.prev /= RESCALE;
            self.cur /= RESCALE;
            self.log_scale += RESCALE.ln();
        }
        if self.log_scale < 0.0 && self.cur != 0.0 && self.cur.abs().ln() + self.log_scale > -600.0 {
            let folded = self.value();
            self.prev *= folded / self.cur;
            self.cur = folded;
            self.log_scale = 0.0;
        }
    }
}

impl Iterator for HermiteSweep {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let v = self.value();
        self.advance();
        Some(v)
    }
}

/// Orthonormal Hermite function `φ_n(x) = (2ⁿ n! √π)^{-1/2} e^{-x²/2} H_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(invalid("hermite order", format!("{n} exceeds {MAX_ORDER}")));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite { op: "hermite_function" });
    }
    Ok(HermiteSweep::new(x).nth(n).expect("sweep is infinite"))
}

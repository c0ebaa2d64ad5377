//! Inverse Mellin transforms (1/2πi)∫_{(c)} h(w) y^{-w} dw of kernels with h(w̄) = conj h(w),
//! tabulated once on a fixed node set so that many y cost one exponential sum each.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::mp::{log2_abs, pi};
use crate::specfun::quadrature::{default_order, gauss_legendre};

pub(crate) struct MellinKernel {
    c: Float,
    t: Vec<Float>,
    wh: Vec<Complex>,
    prec: u32,
}

impl MellinKernel {
    fn build<H: Fn(&Complex) -> Complex>(h: &H, c: f64, height: f64, panels: usize, prec: u32) -> Self {
        let m = default_order(prec);
        let rule = gauss_legendre(m, prec);
        let cf = Float::with_val(prec, c);
        let width = Float::with_val(prec, height) / panels as u32;
        let half = Float::with_val(prec, &width / 2u32);
        let mut t = Vec::with_capacity(panels * m);
        let mut wh = Vec::with_capacity(panels * m);
        for j in 0..panels {
            let mid = Float::with_val(prec, &width * j as u32) + &half;
            for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
                let tj = Float::with_val(prec, x * &half) + &mid;
                let wj = Float::with_val(prec, w * &half);
                let hv = h(&Complex::with_val(prec, (&cf, &tj)));
                wh.push(hv * wj);
                t.push(tj);
            }
        }
        MellinKernel { c: cf, t, wh, prec }
    }

    /// Nodes are doubled until the value at y = 1 and at y = y_max is stable to tol/4.
    pub(crate) fn converged<H: Fn(&Complex) -> Complex>(
        h: &H,
        c: f64,
        height: f64,
        y_max: f64,
        tol: f64,
        prec: u32,
        min_panels: usize,
    ) -> Result<Self> {
        let ln_max = Float::with_val(prec, y_max).ln();
        let zero = Float::new(prec);
        let mut panels = ((height * (1.0 + ln_max.to_f64().abs()) / 12.0).ceil() as usize).max(min_panels).max(4);
        let mut prev = MellinKernel::build(h, c, height, panels, prec);
        for _ in 0..8 {
            panels *= 2;
            let next = MellinKernel::build(h, c, height, panels, prec);
            let d0 = Float::with_val(prec, next.eval(&zero) - prev.eval(&zero));
            let d1 = Float::with_val(prec, next.eval(&ln_max) - prev.eval(&ln_max));
            let worst = log2_abs(&d0).max(log2_abs(&d1));
            prev = next;
            if worst < (tol / 4.0).log2() {
                return Ok(prev);
            }
        }
        Err(Error::NonConvergence(format!("inverse Mellin nodes on Re w = {c} did not settle")))
    }

    /// (1/π) Re Σ_j ω_j h(c + i t_j) y^{-c - i t_j}, given ln y.
    pub(crate) fn eval(&self, ln_y: &Float) -> Float {
        let prec = self.prec;
        let mut acc = Float::new(prec);
        for (t, wh) in self.t.iter().zip(self.wh.iter()) {
            let phase = -Float::with_val(prec, t * ln_y);
            let (s, c) = phase.sin_cos(Float::new(prec));
            acc += Float::with_val(prec, wh.real() * &c);
            acc -= Float::with_val(prec, wh.imag() * &s);
        }
        let decay = (-Float::with_val(prec, &self.c * ln_y)).exp();
        acc * decay / pi(prec)
    }

    #[cfg(test)]
    pub(crate) fn nodes(&self) -> usize {
        self.t.len()
    }
}

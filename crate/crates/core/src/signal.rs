//! Test signals: LFM chirps, Gaussian beam pairs, seeded complex AWGN.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Uniformly sampled complex time series. Sample `n` sits at `t0 + n * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    t0: f64,
    dt: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, t0: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidArgument("t0 must be finite".into()));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a signal needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        Ok(Self { samples, t0, dt })
    }

    /// Samples `func` at `t0 + n * dt` for `n` in `0..n`.
    pub fn from_fn(t0: f64, dt: f64, n: usize, func: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..n).map(|k| func(t0 + k as f64 * dt)).collect();
        Self::new(samples, t0, dt)
    }

    /// Endpoint-inclusive grid over `[-half_support, half_support]`.
    pub fn symmetric(
        half_support: f64,
        n: usize,
        func: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let (t0, dt) = symmetric_grid(half_support, n)?;
        Self::from_fn(t0, dt, n, func)
    }

    /// Grid with `t = 0` at index `n / 2`, i.e. `t0 = -(n/2) * dt`.
    pub fn centered(dt: f64, n: usize, func: impl Fn(f64) -> Complex64) -> Result<Self> {
        let t0 = -((n / 2) as f64) * dt;
        Self::from_fn(t0, dt, n, func)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |n| self.time(n))
    }

    /// Zero-extended sample access.
    #[inline]
    pub fn at(&self, n: isize) -> Complex64 {
        if n < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.samples.get(n as usize).copied().unwrap_or_default()
    }

    pub fn same_grid(&self, other: &Signal) -> bool {
        self.len() == other.len() && self.t0 == other.t0 && self.dt == other.dt
    }

    /// Index of the sample at `t = 0`, if the grid has one.
    pub fn zero_index(&self) -> Option<usize> {
        let pos = -self.t0 / self.dt;
        let idx = pos.round();
        if (pos - idx).abs() <= 1e-9 && idx >= 0.0 && (idx as usize) < self.len() {
            Some(idx as usize)
        } else {
            None
        }
    }

    /// Mean sample power.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dt
    }

    pub fn map(&self, func: impl Fn(f64, Complex64) -> Complex64) -> Signal {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(n, &z)| func(self.time(n), z))
            .collect();
        Signal {
            samples,
            t0: self.t0,
            dt: self.dt,
        }
    }

    pub fn scale(&self, alpha: Complex64) -> Signal {
        self.map(|_, z| alpha * z)
    }

    /// Samplewise sum on a shared grid.
    pub fn add(&self, other: &Signal) -> Result<Signal> {
        check_grid(self, other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Signal {
            samples,
            t0: self.t0,
            dt: self.dt,
        })
    }

    /// `f(t - shift * dt)` on the same grid; samples entering from outside are zero.
    pub fn delay(&self, shift: isize) -> Signal {
        let samples = (0..self.len() as isize).map(|n| self.at(n - shift)).collect();
        Signal {
            samples,
            t0: self.t0,
            dt: self.dt,
        }
    }

    /// `f(-t)` on the same grid. Requires the grid to be closed under negation
    /// (`-2 t0 / dt` integral); samples reflecting off the grid are zero.
    pub fn reflect(&self) -> Result<Signal> {
        let c = -2.0 * self.t0 / self.dt;
        let ci = c.round();
        if (c - ci).abs() > 1e-9 {
            return Err(Error::Alignment(
                "grid is not symmetric under t -> -t".into(),
            ));
        }
        let ci = ci as isize;
        let samples = (0..self.len() as isize).map(|n| self.at(ci - n)).collect();
        Ok(Signal {
            samples,
            t0: self.t0,
            dt: self.dt,
        })
    }
}

pub(crate) fn check_grid(a: &Signal, b: &Signal) -> Result<()> {
    if a.same_grid(b) {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "(N={}, t0={}, dt={}) vs (N={}, t0={}, dt={})",
            a.len(),
            a.t0,
            a.dt,
            b.len(),
            b.t0,
            b.dt
        )))
    }
}

/// `(t0, dt)` of the endpoint-inclusive grid over `[-half_support, half_support]`.
pub fn symmetric_grid(half_support: f64, n: usize) -> Result<(f64, f64)> {
    if !(half_support > 0.0) || !half_support.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "half_support must be positive, got {half_support}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    Ok((-half_support, 2.0 * half_support / (n - 1) as f64))
}

/// One chirp `amp * exp(i (nu0 t + xi0 t^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfmComponent {
    pub amp: Complex64,
    /// Initial frequency, rad/s.
    pub nu0: f64,
    /// Chirp rate, rad/s^2.
    pub xi0: f64,
}

impl LfmComponent {
    pub fn new(amp: f64, nu0: f64, xi0: f64) -> Self {
        Self {
            amp: Complex64::new(amp, 0.0),
            nu0,
            xi0,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Complex64 {
        self.amp * Complex64::cis(self.nu0 * t + self.xi0 * t * t)
    }

    fn validate(&self) -> Result<()> {
        let finite = self.amp.re.is_finite()
            && self.amp.im.is_finite()
            && self.nu0.is_finite()
            && self.xi0.is_finite();
        if !finite || self.amp.norm() == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "LFM component must be finite with nonzero amplitude: {self:?}"
            )));
        }
        Ok(())
    }
}

pub fn make_lfm(comp: &LfmComponent, half_support: f64, n: usize) -> Result<Signal> {
    comp.validate()?;
    Signal::symmetric(half_support, n, |t| comp.eval(t))
}

pub fn make_multicomponent(
    comps: &[LfmComponent],
    half_support: f64,
    n: usize,
) -> Result<Signal> {
    if comps.is_empty() {
        return Err(Error::InvalidArgument("component list is empty".into()));
    }
    for c in comps {
        c.validate()?;
    }
    Signal::symmetric(half_support, n, |t| comps.iter().map(|c| c.eval(t)).sum())
}

/// `exp(-(t-c1)^2/sqrt2) + exp(-(t-c2)^2/sqrt2)`.
pub fn gaussian_pair(centers: (f64, f64), t: f64) -> f64 {
    let w = std::f64::consts::SQRT_2;
    (-(t - centers.0).powi(2) / w).exp() + (-(t - centers.1).powi(2) / w).exp()
}

pub fn make_gaussian_pair(centers: (f64, f64), half_support: f64, n: usize) -> Result<Signal> {
    if !centers.0.is_finite() || !centers.1.is_finite() {
        return Err(Error::InvalidArgument("centers must be finite".into()));
    }
    Signal::symmetric(half_support, n, |t| Complex64::new(gaussian_pair(centers, t), 0.0))
}

/// Adds circularly-symmetric complex Gaussian noise at `snr_db` relative to
/// the signal's mean power. `f64::INFINITY` returns the input unchanged.
pub fn add_awgn(f: &Signal, snr_db: f64, seed: u64) -> Result<Signal> {
    if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(format!("invalid SNR {snr_db} dB")));
    }
    let power = f.power();
    if !(power > 0.0) {
        return Err(Error::Domain("SNR is undefined for a zero-energy signal".into()));
    }
    if snr_db == f64::INFINITY {
        return Ok(f.clone());
    }
    let noise_power = power / 10f64.powf(snr_db / 10.0);
    let sigma = (noise_power / 2.0).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = f
        .samples
        .iter()
        .map(|&z| {
            let re = normal.sample(&mut rng);
            let im = normal.sample(&mut rng);
            z + Complex64::new(re, im)
        })
        .collect();
    Ok(Signal {
        samples,
        t0: f.t0,
        dt: f.dt,
    })
}

/// Riemann approximation of `<f, g> = int f conj(g) dt`.
pub fn inner_product(f: &Signal, g: &Signal) -> Result<Complex64> {
    check_grid(f, g)?;
    let s: Complex64 = f
        .samples
        .iter()
        .zip(&g.samples)
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s * f.dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lfm_matches_defining_exponential() {
        let comp = LfmComponent::new(1.0, 0.1, 0.2);
        let r = make_lfm(&comp, 10.0, 21).unwrap();
        assert_eq!(r.dt(), 1.0);
        // t = 1 is sample 11
        assert!((r.time(11) - 1.0).abs() < 1e-15);
        let z = r.samples()[11];
        assert!((z - c(0.3f64.cos(), 0.3f64.sin())).norm() < 1e-15);
        for (n, z) in r.samples().iter().enumerate() {
            let t = r.time(n);
            let want = Complex64::cis(0.1 * t + 0.2 * t * t);
            assert!((z - want).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_phase_lfm_is_constant() {
        let r = make_lfm(&LfmComponent::new(1.0, 0.0, 0.0), 3.0, 17).unwrap();
        assert!(r.samples().iter().all(|&z| z == c(1.0, 0.0)));
    }

    #[test]
    fn lfm_argument_errors() {
        let comp = LfmComponent::new(1.0, 0.1, 0.2);
        assert!(make_lfm(&comp, 10.0, 1).is_err());
        assert!(make_lfm(&comp, 0.0, 16).is_err());
        assert!(make_lfm(&comp, -1.0, 16).is_err());
        assert!(make_lfm(&LfmComponent::new(0.0, 0.1, 0.2), 10.0, 16).is_err());
    }

    #[test]
    fn multicomponent_sums_and_cancels() {
        let a = LfmComponent::new(1.0, 0.1, 0.2);
        let b = LfmComponent::new(1.0, 0.3, 0.2);
        let u = make_multicomponent(&[a, b], 10.0, 101).unwrap();
        for (n, z) in u.samples().iter().enumerate() {
            let t = u.time(n);
            let want = Complex64::cis(0.1 * t + 0.2 * t * t) + Complex64::cis(0.3 * t + 0.2 * t * t);
            assert!((z - want).norm() < 1e-14);
        }
        let single = make_multicomponent(&[a], 10.0, 101).unwrap();
        assert_eq!(single, make_lfm(&a, 10.0, 101).unwrap());

        let neg = LfmComponent::new(-1.0, 0.7, -0.3);
        let pos = LfmComponent::new(1.0, 0.7, -0.3);
        let zero = make_multicomponent(&[pos, neg], 5.0, 64).unwrap();
        assert!(zero.samples().iter().all(|z| z.norm() == 0.0));

        assert!(make_multicomponent(&[], 10.0, 64).is_err());
    }

    #[test]
    fn gaussian_pair_values() {
        let w = std::f64::consts::SQRT_2;
        let g = make_gaussian_pair((0.0, 4.0), 10.0, 101).unwrap();
        // dt = 0.2: t = 0 at index 50, t = 2 at index 60
        assert!((g.samples()[50].re - (1.0 + (-16.0 / w).exp())).abs() < 1e-15);
        assert!((g.samples()[60].re - 2.0 * (-4.0 / w).exp()).abs() < 1e-14);
        let d = make_gaussian_pair((0.0, 0.0), 10.0, 101).unwrap();
        for (n, z) in d.samples().iter().enumerate() {
            let t = d.time(n);
            assert!((z.re - 2.0 * (-t * t / w).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn awgn_noiseless_and_deterministic() {
        let f = make_lfm(&LfmComponent::new(1.0, 0.1, 0.2), 10.0, 512).unwrap();
        assert_eq!(add_awgn(&f, f64::INFINITY, 7).unwrap(), f);
        let a = add_awgn(&f, 5.0, 42).unwrap();
        let b = add_awgn(&f, 5.0, 42).unwrap();
        assert_eq!(a, b);
        let c = add_awgn(&f, 5.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn awgn_hits_requested_snr() {
        let f = make_lfm(&LfmComponent::new(1.0, 0.1, 0.2), 10.0, 4096).unwrap();
        for seed in [1u64, 2, 3, 99] {
            let y = add_awgn(&f, 10.0, seed).unwrap();
            let noise_power = y
                .samples()
                .iter()
                .zip(f.samples())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                / f.len() as f64;
            let snr = 10.0 * (f.power() / noise_power).log10();
            assert!((snr - 10.0).abs() < 0.5, "seed {seed}: {snr} dB");
        }
    }

    #[test]
    fn awgn_rejects_zero_energy() {
        let z = Signal::new(vec![Complex64::default(); 16], 0.0, 0.1).unwrap();
        assert!(matches!(add_awgn(&z, 10.0, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn inner_product_constant_and_gaussian() {
        let one = Signal::symmetric(1.0, 20001, |_| c(1.0, 0.0)).unwrap();
        let e = inner_product(&one, &one).unwrap();
        assert!((e.re - 2.0).abs() < 1e-3 && e.im == 0.0);

        let w = std::f64::consts::SQRT_2;
        let g = Signal::symmetric(20.0, 4096, |t| c((-t * t / w).exp(), 0.0)).unwrap();
        let e = inner_product(&g, &g).unwrap();
        let want = (std::f64::consts::PI / w).sqrt();
        assert!((want - 1.4903).abs() < 5e-4);
        assert!((e.re - want).abs() < 1e-9, "{} vs {want}", e.re);
    }

    #[test]
    fn inner_product_grid_mismatch() {
        let a = Signal::symmetric(1.0, 16, |_| c(1.0, 0.0)).unwrap();
        let b = Signal::symmetric(2.0, 16, |_| c(1.0, 0.0)).unwrap();
        assert!(matches!(inner_product(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn reflect_and_delay() {
        let f = Signal::symmetric(2.0, 5, |t| c(t, 0.0)).unwrap();
        let r = f.reflect().unwrap();
        let vals: Vec<f64> = r.samples().iter().map(|z| z.re).collect();
        assert_eq!(vals, vec![2.0, 1.0, 0.0, -1.0, -2.0]);
        let d = f.delay(2);
        let vals: Vec<f64> = d.samples().iter().map(|z| z.re).collect();
        assert_eq!(vals, vec![0.0, 0.0, -2.0, -1.0, 0.0]);
        let skew = Signal::from_fn(-1.3, 1.0, 4, |_| c(1.0, 0.0)).unwrap();
        assert!(skew.reflect().is_err());
    }

    fn arb_signal(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b)), n)
    }

    proptest! {
        #[test]
        fn inner_product_is_sesquilinear(
            fs in arb_signal(32), gs in arb_signal(32), hs in arb_signal(32),
            ar in -2.0..2.0f64, ai in -2.0..2.0f64,
        ) {
            let f = Signal::new(fs, -1.0, 0.05).unwrap();
            let g = Signal::new(gs, -1.0, 0.05).unwrap();
            let h = Signal::new(hs, -1.0, 0.05).unwrap();
            let alpha = c(ar, ai);
            let lhs = inner_product(&f.scale(alpha), &g).unwrap();
            let rhs = alpha * inner_product(&f, &g).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
            let lhs = inner_product(&f.add(&h).unwrap(), &g).unwrap();
            let rhs = inner_product(&f, &g).unwrap() + inner_product(&h, &g).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
            let fg = inner_product(&f, &g).unwrap();
            let gf = inner_product(&g, &f).unwrap();
            prop_assert!((fg - gf.conj()).norm() < 1e-12);
        }

        #[test]
        fn awgn_is_pure(seed in any::<u64>(), snr in -10.0..30.0f64) {
            let f = make_lfm(&LfmComponent::new(1.0, 0.1, 0.2), 10.0, 64).unwrap();
            prop_assert_eq!(add_awgn(&f, snr, seed).unwrap(), add_awgn(&f, snr, seed).unwrap());
        }
    }
}

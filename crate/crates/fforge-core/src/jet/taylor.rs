//! The jet value type: sparse truncated Taylor series with exact coefficient
//! arithmetic.

use std::collections::{BTreeMap, HashMap};

use super::{JetConfig, JetError, MultiIndex, NUM_VARS};

/// A truncated Taylor expansion of a scalar function around a sample point.
///
/// The coefficient stored at multi-index `α` is `∂^α f(p) / α!`; the constant
/// term is the function value. Coefficients are kept sparsely in a
/// canonically ordered map, so identical computations produce bitwise
/// identical jets.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    config: JetConfig,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl Jet {
    /// The constant function `value`. Exact at every order.
    pub fn constant(value: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        if value != 0.0 {
            coeffs.insert(MultiIndex::zero(), value);
        }
        Jet { config: JetConfig::EXACT, coeffs }
    }

    /// The coordinate function of variable `var`, seeded at `value`.
    ///
    /// Its expansion is `value + δ_var`, which is exact; the jet nevertheless
    /// carries `config` as its validity certificate so that every expression
    /// built from seeds is bounded by the evaluation config. If the config
    /// cannot store a first-order term in `var`'s class, the linear term is
    /// dropped — the config then simply does not track this variable.
    pub fn variable(var: usize, value: f64, config: JetConfig) -> Self {
        assert!(var < NUM_VARS, "variable index out of range");
        let mut coeffs = BTreeMap::new();
        if value != 0.0 {
            coeffs.insert(MultiIndex::zero(), value);
        }
        let lin = MultiIndex::unit(var);
        if config.admits(lin) {
            coeffs.insert(lin, 1.0);
        }
        Jet { config, coeffs }
    }

    /// The zero jet with the given certificate.
    pub fn zero(config: JetConfig) -> Self {
        Jet { config, coeffs: BTreeMap::new() }
    }

    pub fn config(&self) -> JetConfig {
        self.config
    }

    /// The function value (constant term).
    pub fn value(&self) -> f64 {
        self.coeffs.get(&MultiIndex::zero()).copied().unwrap_or(0.0)
    }

    /// The raw Taylor coefficient at `idx` (i.e. `∂^α f / α!`), zero if absent.
    pub fn coefficient(&self, idx: MultiIndex) -> f64 {
        self.coeffs.get(&idx).copied().unwrap_or(0.0)
    }

    /// The partial derivative `∂^α f` at the sample point: `α! ·` coefficient.
    ///
    /// Fails with [`JetError::OrderExceeded`] if `α` lies outside the jet's
    /// validity certificate — the coefficient there would be silently wrong,
    /// not merely missing.
    pub fn extract_partial(&self, idx: MultiIndex) -> Result<f64, JetError> {
        if !self.config.admits(idx) {
            return Err(JetError::OrderExceeded {
                requested: idx,
                max_total: self.config.max_total_order,
                max_position: self.config.max_position_order,
                max_velocity: self.config.max_velocity_order,
            });
        }
        Ok(idx.factorial() * self.coefficient(idx))
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Iterates coefficients in graded-lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.coeffs.iter()
    }

    // ----- linear arithmetic ------------------------------------------------

    pub fn add(&self, other: &Jet) -> Jet {
        let config = self.config.meet(&other.config);
        let mut coeffs = self.coeffs.clone();
        for (idx, v) in &other.coeffs {
            let slot = coeffs.entry(*idx).or_insert(0.0);
            *slot += v;
            if *slot == 0.0 {
                coeffs.remove(idx);
            }
        }
        coeffs.retain(|idx, _| config.admits(*idx));
        Jet { config, coeffs }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Jet {
        let coeffs = self.coeffs.iter().map(|(i, v)| (*i, -v)).collect();
        Jet { config: self.config, coeffs }
    }

    /// Multiplication by a real scalar.
    pub fn scale(&self, factor: f64) -> Jet {
        if factor == 0.0 {
            return Jet::zero(self.config);
        }
        let coeffs = self.coeffs.iter().map(|(i, v)| (*i, factor * v)).collect();
        Jet { config: self.config, coeffs }
    }

    // ----- multiplication ---------------------------------------------------

    /// Truncated convolution product. Monomials outside the meet of the two
    /// certificates are pruned during accumulation, enforcing the per-class
    /// caps at multiplication time.
    pub fn mul(&self, other: &Jet) -> Jet {
        let config = self.config.meet(&other.config);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Jet::zero(config);
        }
        // Accumulate in a hash map (cheap inserts), then normalise into the
        // ordered representation. The accumulation order is the deterministic
        // nested-loop order, so sums are reproducible bit for bit.
        let mut acc: HashMap<MultiIndex, f64> =
            HashMap::with_capacity(self.coeffs.len().max(other.coeffs.len()) * 2);
        for (ia, va) in &self.coeffs {
            for (ib, vb) in &other.coeffs {
                let idx = ia.add(ib);
                if config.admits(idx) {
                    *acc.entry(idx).or_insert(0.0) += va * vb;
                }
            }
        }
        let coeffs = acc.into_iter().filter(|(_, v)| *v != 0.0).collect();
        Jet { config, coeffs }
    }

    /// Integer power by repeated multiplication (exact; no domain
    /// restriction for positive exponents). Negative exponents go through the
    /// reciprocal and require a nonzero constant term.
    pub fn powi(&self, n: i32) -> Result<Jet, JetError> {
        if n == 0 {
            return Ok(Jet::constant(1.0));
        }
        let mut base = if n < 0 { self.recip()? } else { self.clone() };
        let mut m = n.unsigned_abs();
        let mut acc: Option<Jet> = None;
        loop {
            if m & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            m >>= 1;
            if m == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.expect("n != 0"))
    }

    // ----- division and elementary functions --------------------------------

    /// `1 / self`; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Jet, JetError> {
        let c = self.value();
        if c == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        // Series of 1/x around c: (-1)^k / c^(k+1).
        self.compose(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign / c.powi(k as i32 + 1)
        })
    }

    pub fn div(&self, other: &Jet) -> Result<Jet, JetError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn exp(&self) -> Result<Jet, JetError> {
        let e = self.value().exp();
        let mut fk = e;
        let mut k_prev = 0usize;
        self.compose(move |k| {
            // e^c / k!, built incrementally.
            while k_prev < k {
                k_prev += 1;
                fk /= k_prev as f64;
            }
            fk
        })
    }

    pub fn ln(&self) -> Result<Jet, JetError> {
        let c = self.value();
        if c <= 0.0 {
            return Err(JetError::Domain { func: "ln", value: c });
        }
        self.compose(|k| {
            if k == 0 {
                c.ln()
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign / (k as f64 * c.powi(k as i32))
            }
        })
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        self.pow_real(0.5)
    }

    /// Real power `self^λ`; requires a strictly positive constant term.
    pub fn pow_real(&self, lambda: f64) -> Result<Jet, JetError> {
        let c = self.value();
        if c <= 0.0 {
            return Err(JetError::Domain { func: "pow_real", value: c });
        }
        // Generalised binomial coefficients: f_k = C(λ, k) · c^(λ-k).
        let mut fk = c.powf(lambda);
        let mut k_prev = 0usize;
        self.compose(move |k| {
            while k_prev < k {
                fk *= (lambda - k_prev as f64) / ((k_prev as f64 + 1.0) * c);
                k_prev += 1;
            }
            fk
        })
    }

    pub fn sin(&self) -> Result<Jet, JetError> {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let mut inv_fact = 1.0;
        let mut k_prev = 0usize;
        self.compose(move |k| {
            while k_prev < k {
                k_prev += 1;
                inv_fact /= k_prev as f64;
            }
            cycle[k % 4] * inv_fact
        })
    }

    pub fn cos(&self) -> Result<Jet, JetError> {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let mut inv_fact = 1.0;
        let mut k_prev = 0usize;
        self.compose(move |k| {
            while k_prev < k {
                k_prev += 1;
                inv_fact /= k_prev as f64;
            }
            cycle[k % 4] * inv_fact
        })
    }

    /// Absolute value: `sign(c) · self` away from zero, undefined at zero.
    pub fn abs(&self) -> Result<Jet, JetError> {
        let c = self.value();
        if c == 0.0 {
            return Err(JetError::Domain { func: "abs", value: c });
        }
        Ok(if c < 0.0 { self.neg() } else { self.clone() })
    }

    /// Univariate composition `f ∘ self` by Horner evaluation in the
    /// zero-constant part `h = self - c`. `series(k)` must return
    /// `f^(k)(c) / k!`; calls arrive with `k = 0, 1, 2, …` in order.
    fn compose<F>(&self, mut series: F) -> Result<Jet, JetError>
    where
        F: FnMut(usize) -> f64,
    {
        let mut h = self.clone();
        h.coeffs.remove(&MultiIndex::zero());
        debug_assert!(
            !self.config.is_exact() || h.is_empty(),
            "series composition over an untruncated non-constant jet cannot terminate"
        );
        if h.is_empty() {
            let mut out = Jet::constant(series(0));
            out.config = self.config;
            return Ok(out);
        }
        let kmax = self.config.max_total_order as usize;
        let fk: Vec<f64> = (0..=kmax).map(&mut series).collect();
        let mut acc = Jet::constant(fk[kmax]);
        for k in (0..kmax).rev() {
            acc = acc.mul(&h).add(&Jet::constant(fk[k]));
        }
        acc.config = self.config;
        Ok(acc)
    }

    // ----- formal differentiation -------------------------------------------

    /// Formal partial derivative with respect to variable `var`.
    ///
    /// Coefficients shift down one order in `var`; the validity certificate
    /// loses one order in `var`'s class and in total, reflecting that the
    /// top-order information has been consumed.
    pub fn derive(&self, var: usize) -> Jet {
        assert!(var < NUM_VARS, "variable index out of range");
        debug_assert!(
            self.config.is_exact()
                || (self.config.max_total_order > 0
                    && if var < super::FIRST_VELOCITY {
                        self.config.max_position_order > 0
                    } else {
                        self.config.max_velocity_order > 0
                    }),
            "formal derivative in variable {var} exceeds the jet's validity certificate"
        );
        let config = if self.config.is_exact() {
            self.config
        } else {
            let mut c = self.config;
            c.max_total_order = c.max_total_order.saturating_sub(1);
            if var < super::FIRST_VELOCITY {
                c.max_position_order = c.max_position_order.saturating_sub(1);
            } else {
                c.max_velocity_order = c.max_velocity_order.saturating_sub(1);
            }
            c
        };
        let mut coeffs = BTreeMap::new();
        for (idx, v) in &self.coeffs {
            let e = idx.exponent(var);
            if e == 0 {
                continue;
            }
            let mut shifted = *idx.exponents();
            shifted[var] -= 1;
            coeffs.insert(MultiIndex::new(shifted), v * e as f64);
        }
        Jet { config, coeffs }
    }
}

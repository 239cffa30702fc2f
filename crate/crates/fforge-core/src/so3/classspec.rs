//! Generators for geometry-definition files of the constructive families.
//!
//! Each function renders a complete `.geom` source (parsable by
//! [`crate::dsl::FinslerSpec`]) for one family of rotation-invariant
//! functions, built from the invariant combinations
//!
//! ```text
//! u = dt - a·dr        v = c·dr² + 2b·dt·dr - w²
//! ```
//!
//! with constant `a`, `b`, `c`. With constant coefficients these
//! combinations are parallel for the product connection whose non-universal
//! coefficients all vanish, so every generated geometry has
//! parallel-transport-invariant `L` by construction.

fn num(x: f64) -> String {
    debug_assert!(x.is_finite(), "spec parameters must be finite, got {x}");
    format!("{x}")
}

/// Power-law family `L = ϑ·u^(2-2λ)·(ρu² + v)^λ`. The domain restricts to
/// the cone where both `u` and `ρu² + v` are positive (via the identity
/// `min(x, y) > 0  ⇔  x + y - |x - y| > 0`).
pub fn power_law_text(lambda: f64, rho: f64, a: f64, b: f64, c: f64, vartheta: f64) -> String {
    format!(
        "# Power-law geometry: L = vartheta * u^(2 - 2*lambda) * q^lambda\n\
         # with u = dt - a*dr and q = rho*u^2 + c*dr^2 + 2*b*dt*dr - w^2.\n\
         name: power-law lambda={lambda} rho={rho}\n\
         param lambda = {lambda}\n\
         param rho = {rho}\n\
         param a = {a}\n\
         param b = {b}\n\
         param c = {c}\n\
         param vartheta = {vartheta}\n\
         domain: let u = dt - a*dr in\n\
         \x20 let q = rho*u^2 + c*dr^2 + 2*b*dt*dr - w^2 in\n\
         \x20 u + q - abs(u - q)\n\
         L: let u = dt - a*dr in\n\
         \x20 let q = rho*u^2 + c*dr^2 + 2*b*dt*dr - w^2 in\n\
         \x20 vartheta*u^(2 - 2*lambda)*q^lambda\n",
        lambda = num(lambda),
        rho = num(rho),
        a = num(a),
        b = num(b),
        c = num(c),
        vartheta = num(vartheta),
    )
}

/// Exponential family `L = φ·u²·exp(μ·v/u²)`, defined wherever `u != 0`.
pub fn exponential_text(mu: f64, a: f64, b: f64, c: f64, varphi: f64) -> String {
    format!(
        "# Exponential geometry: L = varphi * u^2 * exp(mu*v/u^2)\n\
         # with u = dt - a*dr and v = c*dr^2 + 2*b*dt*dr - w^2.\n\
         name: exponential mu={mu}\n\
         param mu = {mu}\n\
         param a = {a}\n\
         param b = {b}\n\
         param c = {c}\n\
         param varphi = {varphi}\n\
         domain: abs(dt - a*dr)\n\
         L: let u = dt - a*dr in\n\
         \x20 let v = c*dr^2 + 2*b*dt*dr - w^2 in\n\
         \x20 varphi*u^2*exp(mu*v/u^2)\n",
        mu = num(mu),
        a = num(a),
        b = num(b),
        c = num(c),
        varphi = num(varphi),
    )
}

/// One-variable family `L = u²·Ξ(v/u²)`, with `Ξ` given as an expression in
/// the single variable `z`; defined wherever `u != 0`.
pub fn one_variable_text(a: f64, b: f64, c: f64, xi: &str) -> String {
    format!(
        "# One-variable geometry: L = u^2 * Xi(z) with z = v/u^2,\n\
         # u = dt - a*dr and v = c*dr^2 + 2*b*dt*dr - w^2.\n\
         name: one-variable\n\
         param a = {a}\n\
         param b = {b}\n\
         param c = {c}\n\
         domain: abs(dt - a*dr)\n\
         L: let u = dt - a*dr in\n\
         \x20 let z = (c*dr^2 + 2*b*dt*dr - w^2)/u^2 in\n\
         \x20 u^2*({xi})\n",
        a = num(a),
        b = num(b),
        c = num(c),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::FinslerSpec;

    #[test]
    fn generated_power_law_parses_and_evaluates() {
        let text = power_law_text(0.3, 1.0, 0.0, 0.0, -1.0, 1.0);
        let spec = FinslerSpec::parse(&text).expect("generated spec must parse");
        assert_eq!(spec.params.get("lambda"), Some(&0.3));
        // Inside the forward cone: u = dt > 0 and q = dt² - dr² - w² > 0.
        let pos = [0.0, 3.0, std::f64::consts::FRAC_PI_2, 0.0];
        let vel = [1.0, 0.2, 0.1, 0.05];
        assert!(spec.in_domain(pos, vel));
        let l = spec.eval_scalar(pos, vel);
        let q: f64 = 1.0 - 0.04 - (0.01 + 0.0025);
        let expect = 1.0f64.powf(1.4) * q.powf(0.3);
        approx::assert_relative_eq!(l, expect, max_relative = 1e-14);
        // Past-pointing or spacelike directions fall outside.
        assert!(!spec.in_domain(pos, [-1.0, 0.0, 0.0, 0.0]));
        assert!(!spec.in_domain(pos, [0.1, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn generated_exponential_parses_and_evaluates() {
        let text = exponential_text(0.25, 0.0, 0.0, -1.0, 1.0);
        let spec = FinslerSpec::parse(&text).expect("generated spec must parse");
        let pos = [0.0, 2.0, 1.0, 0.5];
        let vel = [2.0, 0.5, 0.0, 0.0];
        let v = -0.25;
        let expect = 4.0 * (0.25f64 * v / 4.0).exp();
        approx::assert_relative_eq!(
            spec.eval_scalar(pos, vel),
            expect,
            max_relative = 1e-14
        );
        assert!(!spec.in_domain(pos, [0.0, 1.0, 0.0, 0.0])); // u = 0
    }

    #[test]
    fn generated_one_variable_with_affine_profile_is_quadratic() {
        let text = one_variable_text(0.0, 0.0, -1.0, "1 + z");
        let spec = FinslerSpec::parse(&text).expect("generated spec must parse");
        // Xi(z) = 1 + z gives L = u² + v = dt² - dr² - w²: plain flat form.
        let pos = [0.0, 5.0, std::f64::consts::FRAC_PI_2, 0.0];
        let vel = [1.3, 0.4, 0.2, 0.1];
        let w2 = 0.04 + 0.01;
        let expect = 1.3f64 * 1.3 - 0.16 - w2;
        approx::assert_relative_eq!(
            spec.eval_scalar(pos, vel),
            expect,
            max_relative = 1e-14
        );
    }

    #[test]
    fn malformed_profile_expression_is_rejected_with_a_located_error() {
        let text = one_variable_text(0.0, 0.0, -1.0, "1 + ");
        let err = FinslerSpec::parse(&text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("expected"), "message: {msg}");
    }
}

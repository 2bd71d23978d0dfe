//! Coupling constants of the two-component Ginzburg-Landau system and the
//! closed-form constants of the far-field profile expansion.

use crate::error::{Error, Result};

/// One of the two components of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Plus,
    Minus,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Plus, Component::Minus];

    pub fn other(self) -> Component {
        match self {
            Component::Plus => Component::Minus,
            Component::Minus => Component::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Component::Plus => 0,
            Component::Minus => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Component::Plus => "plus",
            Component::Minus => "minus",
        }
    }
}

/// Constants `(A+, A-, B, t+, t-)` of the coupled system
///
/// ```text
/// -Δw± + [A±(|w±|² - t±²) + B(|w∓|² - t∓²)] w± = 0
/// ```
///
/// subject to `A± > 0`, `B² < A+·A-` and `t± > 0`, `t+² + t-² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GLParams {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b: f64,
    pub t_plus: f64,
    pub t_minus: f64,
}

impl GLParams {
    pub fn new(a_plus: f64, a_minus: f64, b: f64, t_plus: f64, t_minus: f64) -> Result<Self> {
        if !(a_plus > 0.0 && a_minus > 0.0) {
            return Err(Error::InvalidParams(format!(
                "A+={a_plus}, A-={a_minus}: both must be positive"
            )));
        }
        if !(b * b < a_plus * a_minus) {
            return Err(Error::InvalidParams(format!(
                "B²={} must be below A+·A-={}",
                b * b,
                a_plus * a_minus
            )));
        }
        if !(t_plus > 0.0 && t_minus > 0.0) {
            return Err(Error::InvalidParams("t± must be positive".into()));
        }
        let unit = t_plus * t_plus + t_minus * t_minus;
        if (unit - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "t+² + t-² = {unit}, must equal 1 within 1e-12"
            )));
        }
        Ok(Self { a_plus, a_minus, b, t_plus, t_minus })
    }

    /// Balanced case `A± = 1`, `t± = 1/√2`, coupling `b`.
    pub fn balanced(b: f64) -> Result<Self> {
        let t = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(1.0, 1.0, b, t, t)
    }

    /// Whether `B < 0`; the multi-helix construction requires it.
    pub fn attractive_coupling(&self) -> bool {
        self.b < 0.0
    }

    pub fn a(&self, c: Component) -> f64 {
        match c {
            Component::Plus => self.a_plus,
            Component::Minus => self.a_minus,
        }
    }

    pub fn t(&self, c: Component) -> f64 {
        match c {
            Component::Plus => self.t_plus,
            Component::Minus => self.t_minus,
        }
    }

    /// Tail constants `c± = (A∓ - B) / ((A+·A- - B²) t±)` of the expansion
    /// `W± ~ t± - c±/(2ℓ²)` for the degree-(1,1) profile.
    pub fn asymptotic_c(&self) -> (f64, f64) {
        let det = self.a_plus * self.a_minus - self.b * self.b;
        (
            (self.a_minus - self.b) / (det * self.t_plus),
            (self.a_plus - self.b) / (det * self.t_minus),
        )
    }

    /// Tail constants for a general degree pair, from the linearized far-field
    /// system `A± t± c± + B t∓ c∓ = n±²`.
    pub fn asymptotic_c_for_degree(&self, degree: (i32, i32)) -> (f64, f64) {
        let (np, nm) = (f64::from(degree.0), f64::from(degree.1));
        let det = self.a_plus * self.a_minus - self.b * self.b;
        let cp = (self.a_minus * np * np - self.b * nm * nm) / (det * self.t_plus);
        let cm = (self.a_plus * nm * nm - self.b * np * np) / (det * self.t_minus);
        (cp, cm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h1_rejects_bad_constants() {
        assert!(GLParams::new(-1.0, 1.0, 0.0, 0.6, 0.8).is_err());
        assert!(GLParams::new(1.0, 1.0, 1.5, 0.6, 0.8).is_err());
        assert!(GLParams::new(1.0, 1.0, 0.0, 0.5, 0.5).is_err()); // t+²+t-² = 0.5
        assert!(GLParams::balanced(-0.3).is_ok());
    }

    #[test]
    fn asymptotic_c_reference_values() {
        // direct evaluation of the closed form: 1.3 / (0.91 * 2^-1/2)
        let p = GLParams::balanced(-0.3).unwrap();
        let (cp, cm) = p.asymptotic_c();
        assert!((cp - 2.0203).abs() < 2e-4, "cp = {cp}");
        assert_eq!(cp, cm);

        let p0 = GLParams::balanced(0.0).unwrap();
        let (cp0, cm0) = p0.asymptotic_c();
        assert!((cp0 - std::f64::consts::SQRT_2).abs() < 1e-14);
        assert_eq!(cp0, cm0);
    }

    #[test]
    fn asymptotic_c_symmetry_and_degree() {
        let p = GLParams::new(1.3, 0.9, -0.4, 0.55, (1.0f64 - 0.55 * 0.55).sqrt()).unwrap();
        let (cp, cm) = p.asymptotic_c();
        let (cp1, cm1) = p.asymptotic_c_for_degree((1, 1));
        assert!((cp - cp1).abs() < 1e-14 && (cm - cm1).abs() < 1e-14);
        // degree (1,-1) has the same squared winding
        let (cp2, cm2) = p.asymptotic_c_for_degree((1, -1));
        assert!((cp - cp2).abs() < 1e-14 && (cm - cm2).abs() < 1e-14);
    }
}

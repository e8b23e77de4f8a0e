//! Closed-form counts for (4,6)-fullerenes, evaluated exactly.
//!
//! Every polynomial is stored with rational coefficients in ascending powers
//! of `h` and evaluated in `Ratio<i128>`; a result is only handed out once it
//! is confirmed to be a nonnegative integer.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::census::CountLedger;
use crate::structure::{StructureClass, StructureKind};

type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("h = 1 is not a valid hexagon count")]
    ForbiddenH,
    #[error("{what} evaluates to {value}, which is not a nonnegative integer")]
    NonIntegralResult { what: String, value: String },
    #[error("N({0}) has no closed form")]
    NoClosedForm(String),
    #[error("N({0}) depends on the structure class, which was not supplied")]
    MissingClassInput(String),
    #[error("no formula for `{0}`")]
    UnknownItem(String),
    #[error("inconsistent formula input: {0}")]
    InconsistentInput(String),
    #[error("count {0} is missing from the ledger")]
    MissingCount(String),
}

/// Arguments shared by all formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FormulaInput {
    pub h: u64,
    pub m: u64,
    pub class: Option<StructureKind>,
    /// Dual-square count.
    pub y: u64,
}

impl FormulaInput {
    /// Input for class-independent formulas only.
    pub fn from_h(h: u64) -> Result<Self, FormulaError> {
        if h == 1 {
            return Err(FormulaError::ForbiddenH);
        }
        Ok(FormulaInput { h, m: 3 * h + 12, class: None, y: 0 })
    }

    pub fn with_class(h: u64, class: StructureKind, y: u64) -> Result<Self, FormulaError> {
        let mut input = Self::from_h(h)?;
        input.class = Some(class);
        input.y = y;
        input.check()?;
        Ok(input)
    }

    pub fn from_structure(class: &StructureClass) -> Result<Self, FormulaError> {
        Self::with_class(class.h as u64, class.kind, class.y() as u64)
    }

    fn check(&self) -> Result<(), FormulaError> {
        let bad = |what: String| Err(FormulaError::InconsistentInput(what));
        match self.class {
            None => Ok(()),
            Some(StructureKind::Cube) if self.h != 0 => bad(format!("cube with h = {}", self.h)),
            Some(StructureKind::Tubular { t }) if t == 0 || self.h != 3 * t as u64 => {
                bad(format!("tube with t = {t} and h = {}", self.h))
            }
            Some(StructureKind::HexagonalPrism) if (self.h, self.y) != (2, 6) => {
                bad(format!("hexagonal prism with h = {}, y = {}", self.h, self.y))
            }
            Some(StructureKind::Lantern) if self.y != 4 => bad(format!("lantern with y = {}", self.y)),
            Some(StructureKind::Dispersive) if self.y > 3 || self.h < 2 => {
                bad(format!("dispersive with h = {}, y = {}", self.h, self.y))
            }
            _ => Ok(()),
        }
    }

    fn branch(&self, name: &str) -> Result<Branch, FormulaError> {
        match self.class {
            None => Err(FormulaError::MissingClassInput(name.to_string())),
            Some(StructureKind::Cube) => Ok(Branch::Cube),
            Some(StructureKind::Tubular { .. }) => Ok(Branch::Tubular),
            Some(_) => Ok(Branch::General),
        }
    }
}

enum Branch {
    Cube,
    Tubular,
    General,
}

// Coefficients as (numerator, denominator), constant term first.
type Coeffs = &'static [(i128, i128)];

const fn int(c: i128) -> (i128, i128) {
    (c, 1)
}

const M1: Coeffs = &[int(12), int(3)];
const M2: Coeffs = &[int(42), (57, 2), (9, 2)];
const M3: Coeffs = &[int(44), int(65), (63, 2), (9, 2)];
const M4: Coeffs = &[int(9), (117, 4), (273, 8), (81, 4), (27, 8)];
const M5: Coeffs = &[int(0), (-27, 5), (39, 4), (-9, 8), (27, 4), (81, 40)];
const M6_TUBULAR: Coeffs = &[int(-9), (1231, 30), (-1873, 40), (405, 16), (-99, 16), (-81, 80), (81, 80)];
// Plus y.
const M6_GENERAL: Coeffs = &[int(-16), (407, 10), (-1873, 40), (405, 16), (-99, 16), (-81, 80), (81, 80)];
// Plus N(Q) / 6.
const M6_BY_Q: Coeffs = &[int(-16), (-123, 10), (-2833, 40), (405, 16), (-99, 16), (-81, 80), (81, 80)];

const N_C: Coeffs = &[int(48), int(12)];
const N_I: Coeffs = &[int(72), int(24)];
const N_H: Coeffs = &[int(6)];
const N_O: Coeffs = &[int(120), int(240), int(72)];
const N_L: Coeffs = &[int(24), int(18)];
const N_P: Coeffs = &[int(120), int(48)];
const N_T: Coeffs = &[int(12), int(27), int(27)];
const N_V: Coeffs = &[int(24), int(36)];
const N_K: Coeffs = &[int(72), int(180), int(234), int(54)];
const N_E: Coeffs = &[int(168), int(180), int(36)];
const N_D: Coeffs = &[int(96), int(210), int(153), int(27)];
const N_J: Coeffs = &[int(0), int(54), int(39), int(108), int(27)];

const N_Q_TUBULAR: Coeffs = &[int(42), int(320), int(144)];
// Plus 6y.
const N_Q_GENERAL: Coeffs = &[int(0), int(318), int(144)];

const N_U_TUBULAR: Coeffs = &[int(54), int(-68), int(216), int(108)];
const N_U_GENERAL: Coeffs = &[int(96), int(-66), int(216), int(108)];
const N_S_TUBULAR: Coeffs = &[int(-54), int(176), int(-138), int(108), int(54)];
const N_S_GENERAL: Coeffs = &[int(-96), int(174), int(-138), int(108), int(54)];
const N_R_TUBULAR: Coeffs = &[int(54), int(-230), (471, 2), (-477, 4), (27, 2), (81, 4)];
const N_R_GENERAL: Coeffs = &[int(96), int(-228), (471, 2), (-477, 4), (27, 2), (81, 4)];

// Forms valid for every class once N(Q) is known: U and R subtract N(Q), S adds it.
const N_U_BY_Q: Coeffs = &[int(96), int(252), int(360), int(108)];
const N_S_BY_Q: Coeffs = &[int(-96), int(-144), int(-282), int(108), int(54)];
const N_R_BY_Q: Coeffs = &[int(96), int(90), (759, 2), (-477, 4), (27, 2), (81, 4)];

/// Path-of-length-five count as published before the correction: `16m - 48`.
const LEGACY_N_P: Coeffs = &[int(144), int(48)];

fn eval(coeffs: Coeffs, h: u64) -> Rational {
    let x = Rational::from_integer(h as i128);
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, &(num, den)| acc * x + Rational::new(num, den))
}

fn to_count(what: &str, value: Rational) -> Result<u64, FormulaError> {
    if !value.is_integer() || value.is_negative() {
        return Err(FormulaError::NonIntegralResult { what: what.to_string(), value: value.to_string() });
    }
    u64::try_from(value.to_integer()).map_err(|_| FormulaError::NonIntegralResult {
        what: what.to_string(),
        value: value.to_string(),
    })
}

/// `M(G, k)` for `k = 1..=5`; these do not depend on the structure class.
pub fn matching_formula(k: usize, h: u64) -> Result<u64, FormulaError> {
    FormulaInput::from_h(h)?;
    let coeffs = match k {
        1 => M1,
        2 => M2,
        3 => M3,
        4 => M4,
        5 => M5,
        _ => return Err(FormulaError::UnknownItem(format!("M{k}"))),
    };
    to_count(&format!("M{k}"), eval(coeffs, h))
}

/// `M(G, 6)`: zero for the cube, one polynomial for tubes and a
/// `y`-dependent one for every other class.
pub fn matching6_formula(class: StructureKind, h: u64, y: u64) -> Result<u64, FormulaError> {
    let input = FormulaInput::with_class(h, class, y)?;
    let value = match input.branch("M6")? {
        Branch::Cube => Rational::zero(),
        Branch::Tubular => eval(M6_TUBULAR, h),
        Branch::General => eval(M6_GENERAL, h) + Rational::from_integer(y as i128),
    };
    to_count("M6", value)
}

/// `M(G, 6)` from the recurrence, given `N(Q)`; holds for every class.
pub fn matching6_from_q(h: u64, n_q: u64) -> Result<u64, FormulaError> {
    FormulaInput::from_h(h)?;
    to_count("M6 via N(Q)", eval(M6_BY_Q, h) + Rational::new(n_q as i128, 6))
}

/// `N(X)` for a catalogued pattern name.
pub fn pattern_formula(name: &str, input: &FormulaInput) -> Result<u64, FormulaError> {
    input.check()?;
    let h = input.h;
    let y = Rational::from_integer(input.y as i128);
    let value = match name {
        "C" => eval(N_C, h),
        "I" => eval(N_I, h),
        "H" => eval(N_H, h),
        "O" => eval(N_O, h),
        "L" => eval(N_L, h),
        "P" => eval(N_P, h),
        "T" => eval(N_T, h),
        "V" => eval(N_V, h),
        "K" => eval(N_K, h),
        "E" => eval(N_E, h),
        "D" => eval(N_D, h),
        "J" => eval(N_J, h),
        "Q" => match input.branch(name)? {
            Branch::Cube => Rational::from_integer(96),
            Branch::Tubular => eval(N_Q_TUBULAR, h),
            Branch::General => eval(N_Q_GENERAL, h) + y * 6,
        },
        "U" => match input.branch(name)? {
            Branch::Cube => Rational::zero(),
            Branch::Tubular => eval(N_U_TUBULAR, h),
            Branch::General => eval(N_U_GENERAL, h) - y * 6,
        },
        "S" => match input.branch(name)? {
            Branch::Cube => Rational::zero(),
            Branch::Tubular => eval(N_S_TUBULAR, h),
            Branch::General => eval(N_S_GENERAL, h) + y * 6,
        },
        "R" => match input.branch(name)? {
            Branch::Cube => Rational::zero(),
            Branch::Tubular => eval(N_R_TUBULAR, h),
            Branch::General => eval(N_R_GENERAL, h) - y * 6,
        },
        "W" => return Err(FormulaError::NoClosedForm(name.to_string())),
        _ => return Err(FormulaError::UnknownItem(name.to_string())),
    };
    to_count(&format!("N({name})"), value)
}

/// `N(U)`, `N(S)` or `N(R)` expressed through `N(Q)`, valid for every class.
pub fn pattern_from_q(name: &str, h: u64, n_q: u64) -> Result<u64, FormulaError> {
    FormulaInput::from_h(h)?;
    let q = Rational::from_integer(n_q as i128);
    let value = match name {
        "U" => eval(N_U_BY_Q, h) - q,
        "S" => eval(N_S_BY_Q, h) + q,
        "R" => eval(N_R_BY_Q, h) - q,
        _ => return Err(FormulaError::UnknownItem(format!("{name} via N(Q)"))),
    };
    to_count(&format!("N({name}) via N(Q)"), value)
}

/// Superseded formulas, kept only to show they disagree with brute force.
pub mod legacy {
    use super::*;

    /// The earlier `N(P) = 16m - 48`, which ignores paths whose middle edge
    /// lies on a square.
    pub fn path5_count(h: u64) -> Result<u64, FormulaError> {
        FormulaInput::from_h(h)?;
        to_count("legacy N(P)", eval(LEGACY_N_P, h))
    }
}

/// Evaluates every formula an input supports, keyed like a [`CountLedger`]:
/// `M1`..`M6` for matchings and the pattern letter for patterns.
pub fn predict_all(input: &FormulaInput) -> BTreeMap<String, Result<u64, FormulaError>> {
    let mut out = BTreeMap::new();
    for k in 1..=5 {
        out.insert(format!("M{k}"), matching_formula(k, input.h));
    }
    let m6 = match input.class {
        Some(class) => matching6_formula(class, input.h, input.y),
        None => Err(FormulaError::MissingClassInput("M6".into())),
    };
    out.insert("M6".into(), m6);
    for name in crate::census::PATTERN_NAMES {
        out.insert(name.to_string(), pattern_formula(name, input));
    }
    out
}

/// Left side minus right side of each counting identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Residuals {
    pub entries: Vec<(String, i128)>,
}

impl Residuals {
    pub fn all_zero(&self) -> bool {
        self.entries.iter().all(|(_, r)| *r == 0)
    }

    pub fn get(&self, name: &str) -> Option<i128> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }
}

/// Names of the ten identities, in the order [`recurrence_residuals`] reports them.
pub const IDENTITY_NAMES: [&str; 10] = [
    "m5_plus_edge",
    "m5_plus_incident_edge",
    "m4_extend_both_ends",
    "k_extend_path_end",
    "m4_plus_edge",
    "m4_plus_incident_edge",
    "m3_extend_both_ends",
    "m3_plus_edge",
    "m3_plus_incident_edge",
    "m2_extend_both_ends",
];

/// Evaluates the ten double-counting identities that tie `k`-matchings to
/// the pattern counts. Each is a count of (structure, extension) pairs done
/// two ways; on true counts every residual is zero.
pub fn recurrence_residuals(ledger: &CountLedger, m: u64) -> Result<Residuals, FormulaError> {
    let mm = |k: usize| {
        ledger
            .matching(k)
            .map(|c| c as i128)
            .ok_or_else(|| FormulaError::MissingCount(format!("M{k}")))
    };
    let n = |name: &str| {
        ledger
            .pattern(name)
            .map(|c| c as i128)
            .ok_or_else(|| FormulaError::MissingCount(name.to_string()))
    };
    let m = m as i128;
    let (m2, m3, m4, m5, m6) = (mm(2)?, mm(3)?, mm(4)?, mm(5)?, mm(6)?);
    let values = [
        m5 * (m - 5) - (6 * m6 + 2 * n("R")? + n("S")?),
        m5 * 10 * 2 - (2 * n("R")? + 2 * n("S")?),
        m4 * 4 * 4 - (n("S")? + 4 * n("T")? + 2 * n("U")? + n("Q")?),
        n("K")? * 2 * 2 - (2 * n("U")? + 2 * n("Q")? + 8 * n("T")?),
        m4 * (m - 4) - (5 * m5 + 2 * n("J")? + n("K")?),
        m4 * 8 * 2 - (2 * n("J")? + 2 * n("K")?),
        m3 * 3 * 4 - (n("K")? + 4 * n("L")? + 2 * n("O")? + n("P")?),
        m3 * (m - 3) - (4 * m4 + 2 * n("D")? + n("E")?),
        m3 * 6 * 2 - (2 * n("D")? + 2 * n("E")?),
        m2 * 2 * 4 - (n("E")? + 4 * n("H")? + 2 * n("I")?),
    ];
    Ok(Residuals { entries: IDENTITY_NAMES.iter().map(|s| s.to_string()).zip(values).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_values() {
        assert_eq!(matching_formula(1, 3), Ok(21));
        assert_eq!(matching_formula(4, 0), Ok(9));
        assert_eq!(matching_formula(5, 0), Ok(0));
        assert_eq!(matching_formula(2, 3), Ok(168));
        assert_eq!(matching_formula(1, 1), Err(FormulaError::ForbiddenH));
        assert!(matches!(matching_formula(7, 3), Err(FormulaError::UnknownItem(_))));
    }

    #[test]
    fn six_matchings() {
        assert_eq!(matching6_formula(StructureKind::Cube, 0, 12), Ok(0));
        assert_eq!(matching6_formula(StructureKind::Tubular { t: 1 }, 3, 6), Ok(367));
        assert_eq!(matching6_formula(StructureKind::HexagonalPrism, 2, 6), Ok(20));
        assert!(matches!(
            matching6_formula(StructureKind::Tubular { t: 1 }, 4, 6),
            Err(FormulaError::InconsistentInput(_))
        ));
    }

    #[test]
    fn patterns() {
        let cube = FormulaInput::with_class(0, StructureKind::Cube, 12).unwrap();
        assert_eq!(pattern_formula("P", &cube), Ok(120));
        assert_eq!(pattern_formula("Q", &cube), Ok(96));
        assert_eq!(pattern_formula("U", &cube), Ok(0));
        let tube = FormulaInput::with_class(3, StructureKind::Tubular { t: 1 }, 6).unwrap();
        assert_eq!(pattern_formula("Q", &tube), Ok(2298));
        assert_eq!(pattern_formula("K", &tube), Ok(4176));
        assert_eq!(pattern_formula("W", &tube), Err(FormulaError::NoClosedForm("W".into())));
        let bare = FormulaInput::from_h(3).unwrap();
        assert_eq!(pattern_formula("Q", &bare), Err(FormulaError::MissingClassInput("Q".into())));
        assert_eq!(pattern_formula("C", &bare), Ok(84));
    }

    #[test]
    fn non_integral_detected() {
        // The tube branch only makes sense at multiples of three.
        let err = to_count("M6", eval(M6_TUBULAR, 2)).unwrap_err();
        assert!(matches!(err, FormulaError::NonIntegralResult { .. }));
        assert!(to_count("x", Rational::from_integer(-1)).is_err());
    }

    #[test]
    fn legacy_path_count() {
        assert_eq!(legacy::path5_count(0), Ok(144));
        assert_eq!(legacy::path5_count(3), Ok(16 * 21 - 48));
    }

    #[test]
    fn residual_bookkeeping() {
        let mut ledger = CountLedger::default();
        for (k, c) in [(1, 12), (2, 42), (3, 44), (4, 9), (5, 0), (6, 0)] {
            ledger.matchings.insert(k, c);
        }
        let cube_counts = [
            ("C", 48), ("D", 96), ("E", 168), ("H", 6), ("I", 72), ("J", 0), ("K", 72), ("L", 24),
            ("O", 120), ("P", 120), ("Q", 96), ("R", 0), ("S", 0), ("T", 12), ("U", 0), ("V", 24),
        ];
        for (name, c) in cube_counts {
            ledger.patterns.insert(name.into(), c);
        }
        let r = recurrence_residuals(&ledger, 12).unwrap();
        assert!(r.all_zero(), "{r:?}");
        *ledger.patterns.get_mut("Q").unwrap() += 1;
        let r = recurrence_residuals(&ledger, 12).unwrap();
        assert_eq!(r.get("m4_extend_both_ends"), Some(-1));
        assert_eq!(r.get("k_extend_path_end"), Some(-2));
        ledger.patterns.remove("T");
        assert_eq!(recurrence_residuals(&ledger, 12), Err(FormulaError::MissingCount("T".into())));
    }
}

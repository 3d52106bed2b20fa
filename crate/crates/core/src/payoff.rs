//! Payoff matrices, their parametrizations and the standard 17-matrix suite.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points per single game. `S` is zero for every matrix in the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct PayoffMatrix {
    t: u32,
    r: u32,
    p: u32,
    s: u32,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    #[serde(rename = "T")]
    t: u32,
    #[serde(rename = "R")]
    r: u32,
    #[serde(rename = "P")]
    p: u32,
    #[serde(rename = "S", default)]
    s: u32,
}

impl TryFrom<RawMatrix> for PayoffMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        PayoffMatrix::with_sucker(raw.t, raw.r, raw.p, raw.s)
    }
}

impl From<PayoffMatrix> for RawMatrix {
    fn from(m: PayoffMatrix) -> Self {
        RawMatrix {
            t: m.t,
            r: m.r,
            p: m.p,
            s: m.s,
        }
    }
}

impl PayoffMatrix {
    /// A matrix with `S = 0`.
    pub fn new(t: u32, r: u32, p: u32) -> Result<Self> {
        Self::with_sucker(t, r, p, 0)
    }

    /// Scoring ignores `S`, so only `S = 0` is accepted.
    pub fn with_sucker(t: u32, r: u32, p: u32, s: u32) -> Result<Self> {
        if !(t > r && r > p && p > s) {
            return Err(Error::InvalidPayoff(format!(
                "T > R > P > S violated by {t}-{r}-{p}-{s}"
            )));
        }
        if s != 0 {
            return Err(Error::InvalidPayoff(format!("S must be 0, got {s}")));
        }
        Ok(PayoffMatrix { t, r, p, s })
    }

    pub const fn t(&self) -> u32 {
        self.t
    }

    pub const fn r(&self) -> u32 {
        self.r
    }

    pub const fn p(&self) -> u32 {
        self.p
    }

    pub const fn s(&self) -> u32 {
        self.s
    }

    /// Report key `"T-R-P"`.
    pub fn key(&self) -> String {
        format!("{}-{}-{}", self.t, self.r, self.p)
    }

    /// Every entry multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> Result<Self> {
        PayoffMatrix::new(self.t * factor, self.r * factor, self.p * factor)
    }

    /// `(a, b)` with `T = (1+a+b)P`, `R = (1+a)P`.
    pub fn ab(&self) -> (Ratio, Ratio) {
        let a = Ratio::new(self.r as i64 - self.p as i64, self.p as i64);
        let b = Ratio::new(self.t as i64 - self.r as i64, self.p as i64);
        (a, b)
    }
}

impl fmt::Display for PayoffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for PayoffMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split('-').collect();
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidPayoff(format!("{s:?}: {e}")))?;
        match nums[..] {
            [t, r, p] => PayoffMatrix::new(t, r, p),
            [t, r, p, s] => PayoffMatrix::with_sucker(t, r, p, s),
            _ => Err(Error::InvalidPayoff(format!("{s:?} is not T-R-P"))),
        }
    }
}

/// Serde adapter writing a matrix as its `"T-R-P"` key.
pub mod key_format {
    use super::PayoffMatrix;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &PayoffMatrix, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&m.key())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PayoffMatrix, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact non-negative rational in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        Ratio {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub const fn integer(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub const fn num(&self) -> i64 {
        self.num
    }

    pub const fn den(&self) -> i64 {
        self.den
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    /// The value as an integer when the denominator is one.
    pub fn to_integer(&self) -> Option<i64> {
        (self.den == 1).then_some(self.num)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl Add for Ratio {
    type Output = Ratio;

    fn add(self, other: Ratio) -> Ratio {
        Ratio::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }
}

impl Sub for Ratio {
    type Output = Ratio;

    fn sub(self, other: Ratio) -> Ratio {
        Ratio::new(
            self.num * other.den - other.num * self.den,
            self.den * other.den,
        )
    }
}

impl Mul for Ratio {
    type Output = Ratio;

    fn mul(self, other: Ratio) -> Ratio {
        Ratio::new(self.num * other.num, self.den * other.den)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Trading-model parameters: `p_ij = alpha + beta*delta_i - gamma*delta_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriceParams {
    pub alpha: Ratio,
    pub beta: Ratio,
    pub gamma: Ratio,
}

impl PriceParams {
    /// `(T, R, P, S)` as rationals.
    pub fn values(&self) -> [Ratio; 4] {
        [
            self.alpha + self.beta,
            self.alpha + self.beta - self.gamma,
            self.alpha,
            self.alpha - self.gamma,
        ]
    }

    pub fn to_matrix(&self) -> Result<PayoffMatrix> {
        let ints: Option<Vec<i64>> = self.values().iter().map(Ratio::to_integer).collect();
        let ints = ints
            .ok_or_else(|| Error::InvalidPayoff(format!("{self:?} yields non-integer payoffs")))?;
        let to_u32 = |v: i64| {
            u32::try_from(v).map_err(|_| Error::InvalidPayoff(format!("negative payoff {v}")))
        };
        PayoffMatrix::with_sucker(
            to_u32(ints[0])?,
            to_u32(ints[1])?,
            to_u32(ints[2])?,
            to_u32(ints[3])?,
        )
    }

    /// The parameters of a matrix with `T + S = P + R`.
    pub fn from_matrix(matrix: &PayoffMatrix) -> Option<Self> {
        let (t, r, p, s) = (
            matrix.t as i64,
            matrix.r as i64,
            matrix.p as i64,
            matrix.s as i64,
        );
        (t + s == p + r).then(|| PriceParams {
            alpha: Ratio::integer(p),
            beta: Ratio::integer(t - p),
            gamma: Ratio::integer(p - s),
        })
    }
}

/// `T = (1+a+b)P`, `R = (1+a)P`, `S = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABParams {
    pub a: Ratio,
    pub b: Ratio,
    pub p: u32,
}

pub fn from_ab(params: ABParams) -> Result<PayoffMatrix> {
    if !params.a.is_positive() || !params.b.is_positive() || params.p == 0 {
        return Err(Error::InvalidPayoff(format!(
            "a, b and P must be positive: {params:?}"
        )));
    }
    let p = Ratio::integer(params.p as i64);
    let one = Ratio::integer(1);
    let t = (one + params.a + params.b) * p;
    let r = (one + params.a) * p;
    match (t.to_integer(), r.to_integer()) {
        (Some(t), Some(r)) => PayoffMatrix::new(t as u32, r as u32, params.p),
        _ => Err(Error::InvalidPayoff(format!(
            "T = {t} or R = {r} is not an integer"
        ))),
    }
}

/// Relation flags of a matrix with `S = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFlags {
    /// `T + S = P + R`, equivalently `b = 1`.
    pub t_eq_r_plus_p: bool,
    /// `2R > T + S`, equivalently `a + 1 > b`.
    pub two_r_gt_t: bool,
    pub a_vs_1: Comparison,
    pub a_vs_b: Comparison,
    pub b_vs_1: Comparison,
}

/// Three-way comparison result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

pub fn classify(matrix: &PayoffMatrix) -> RelationFlags {
    let (a, b) = matrix.ab();
    let one = Ratio::integer(1);
    RelationFlags {
        t_eq_r_plus_p: matrix.t + matrix.s == matrix.r + matrix.p,
        two_r_gt_t: 2 * matrix.r > matrix.t + matrix.s,
        a_vs_1: a.cmp(&one).into(),
        a_vs_b: a.cmp(&b).into(),
        b_vs_1: b.cmp(&one).into(),
    }
}

/// The 17 investigated matrices, in their customary order.
pub fn standard_suite() -> Vec<PayoffMatrix> {
    const SUITE: [(u32, u32, u32); 17] = [
        (3, 2, 1),
        (4, 3, 1),
        (5, 3, 2),
        (5, 4, 2),
        (6, 5, 2),
        (4, 3, 2),
        (6, 4, 3),
        (6, 5, 3),
        (5, 3, 1),
        (7, 4, 2),
        (9, 5, 3),
        (4, 2, 1),
        (5, 2, 1),
        (6, 3, 1),
        (7, 3, 1),
        (6, 3, 2),
        (7, 3, 2),
    ];
    SUITE
        .iter()
        .map(|&(t, r, p)| PayoffMatrix::new(t, r, p).expect("suite matrices are valid"))
        .collect()
}

/// Reads a suite from JSON: an array of `{"T","R","P","S"}` objects.
pub fn load_suite(path: &Path) -> Result<Vec<PayoffMatrix>> {
    let text = std::fs::read_to_string(path)?;
    let suite: Vec<PayoffMatrix> = serde_json::from_str(&text)?;
    if suite.is_empty() {
        return Err(Error::InvalidPayoff(format!(
            "{} holds no matrices",
            path.display()
        )));
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab(a: (i64, i64), b: (i64, i64), p: u32) -> ABParams {
        ABParams {
            a: Ratio::new(a.0, a.1),
            b: Ratio::new(b.0, b.1),
            p,
        }
    }

    #[test]
    fn from_ab_examples() {
        assert_eq!(from_ab(ab((1, 1), (1, 1), 1)).unwrap().key(), "3-2-1");
        assert_eq!(from_ab(ab((2, 1), (1, 1), 1)).unwrap().key(), "4-3-1");
        assert_eq!(from_ab(ab((1, 1), (3, 1), 1)).unwrap().key(), "5-2-1");
        assert_eq!(from_ab(ab((1, 2), (1, 1), 2)).unwrap().key(), "5-3-2");
        assert!(from_ab(ab((1, 2), (1, 1), 1)).is_err());
        assert!(from_ab(ab((0, 1), (1, 1), 1)).is_err());
    }

    #[test]
    fn classify_examples() {
        let f = classify(&PayoffMatrix::new(3, 2, 1).unwrap());
        assert!(f.t_eq_r_plus_p && f.two_r_gt_t);
        let f = classify(&PayoffMatrix::new(5, 3, 1).unwrap());
        assert!(!f.t_eq_r_plus_p && f.two_r_gt_t);
        let f = classify(&PayoffMatrix::new(4, 2, 1).unwrap());
        assert!(!f.t_eq_r_plus_p && !f.two_r_gt_t);
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        assert!(PayoffMatrix::new(3, 3, 1).is_err());
        assert!(PayoffMatrix::new(3, 2, 0).is_err());
        assert!(PayoffMatrix::with_sucker(4, 3, 2, 1).is_err());
        assert!("3-2".parse::<PayoffMatrix>().is_err());
        assert_eq!("6-5-3".parse::<PayoffMatrix>().unwrap().key(), "6-5-3");
    }

    #[test]
    fn suite_is_distinct_and_valid() {
        let suite = standard_suite();
        assert_eq!(suite.len(), 17);
        assert_eq!(suite[0].key(), "3-2-1");
        let mut keys: Vec<String> = suite.iter().map(PayoffMatrix::key).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 17);
        for m in &suite {
            assert!(m.t() > m.r() && m.r() > m.p() && m.p() > m.s() && m.s() == 0);
        }
    }

    #[test]
    fn price_parametrization_round_trips() {
        let m = PayoffMatrix::new(3, 2, 1).unwrap();
        let price = PriceParams::from_matrix(&m).unwrap();
        assert_eq!(price.gamma, price.alpha);
        assert!(price.beta > price.gamma);
        assert_eq!(price.to_matrix().unwrap(), m);
        assert!(PriceParams::from_matrix(&PayoffMatrix::new(5, 3, 1).unwrap()).is_none());
    }

    #[test]
    fn json_schema() {
        let m: PayoffMatrix = serde_json::from_str(r#"{"T":6,"R":5,"P":3,"S":0}"#).unwrap();
        assert_eq!(m.key(), "6-5-3");
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"T":6,"R":5,"P":3,"S":0}"#
        );
        assert!(serde_json::from_str::<PayoffMatrix>(r#"{"T":2,"R":5,"P":3}"#).is_err());
    }

    proptest! {
        #[test]
        fn flags_agree_with_ab_sign_tests(an in 1i64..12, ad in 1i64..5, bn in 1i64..12, bd in 1i64..5, p in 1u32..7) {
            let params = ab((an, ad), (bn, bd), p);
            if let Ok(m) = from_ab(params) {
                let f = classify(&m);
                let one = Ratio::integer(1);
                prop_assert_eq!(f.t_eq_r_plus_p, params.b == one);
                prop_assert_eq!(f.two_r_gt_t, params.a + one > params.b);
                prop_assert_eq!(f.a_vs_1, params.a.cmp(&one).into());
                prop_assert_eq!(f.a_vs_b, params.a.cmp(&params.b).into());
                prop_assert_eq!(f.b_vs_1, params.b.cmp(&one).into());
                prop_assert_eq!(m.ab(), (params.a, params.b));
            }
        }
    }
}

//! Dense univariate polynomials over `Q`, places of the projective line, and
//! factorization-free valuation clusters for a short Weierstrass pair.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Parses `"num/den"` or an integer literal.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(num, den))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Formats a rational as `"num/den"` or an integer literal.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A valuation that may be infinite (valuation of the zero function).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Multiplies by a ramification index.
    pub fn scale(self, e: u32) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v * e),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl PartialEq<u32> for Valuation {
    fn eq(&self, other: &u32) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<u32> for Valuation {
    fn partial_cmp(&self, other: &u32) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u32(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// Polynomial with rational coefficients, lowest degree first and no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Q::from_integer(c.into())).collect())
    }

    /// Parses a coefficient list such as `["0", "1/2", "3"]`.
    pub fn from_strs<S: AsRef<str>>(coeffs: &[S]) -> Result<Self> {
        Ok(Self::new(
            coeffs
                .iter()
                .map(|c| parse_rational(c.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `t - c`.
    pub fn linear(c: &Q) -> Self {
        Self::new(vec![-c.clone(), Q::one()])
    }

    /// `prod (t - r)` over integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| {
            &acc * &Self::linear(&Q::from_integer(r.into()))
        })
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if sd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Q::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero()
            && other
                .divrem(self)
                .map(|(_, r)| r.is_zero())
                .unwrap_or(false)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        // primitive pseudo-remainder sequence over Z
        let (mut a, mut b) = (primitive(self), primitive(other));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive_prem(&a, &b);
            a = b;
            b = r;
        }
        Poly::new(a.into_iter().map(Q::from_integer).collect()).monic()
    }

    /// Yun's algorithm: pairs `(s_i, i)` with `self = c * prod s_i^i`, the
    /// `s_i` monic, squarefree, pairwise coprime and non-constant.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0)?;
        let mut c = df.div_exact(&a0)?;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a)?;
            c = d.div_exact(&a)?;
            d = &c - &b.derivative();
            i += 1;
        }
        Ok(out)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Order of vanishing at a point, or the degree deficit `bound - deg` at
    /// infinity. The zero polynomial has infinite valuation everywhere.
    pub fn valuation_at(&self, point: &Point, bound: u32) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        match point {
            Point::Infinity => {
                let deg = self.degree().unwrap() as u32;
                Valuation::Finite(bound.saturating_sub(deg))
            }
            Point::Rational(c) => {
                let lin = Poly::linear(c);
                let mut p = self.clone();
                let mut v = 0;
                loop {
                    let (q, r) = p.divrem(&lin).expect("nonzero divisor");
                    if !r.is_zero() {
                        break;
                    }
                    p = q;
                    v += 1;
                }
                Valuation::Finite(v)
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = format_rational(&abs);
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{coef}")?,
                (_, true) => {}
                (_, false) => write!(f, "{coef}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// A closed point of the affine line with rational coordinate, or infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Rational(Q),
    Infinity,
}

impl Point {
    pub fn integer(c: i64) -> Self {
        Point::Rational(Q::from_integer(c.into()))
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Point::Infinity),
            other => Ok(Point::Rational(parse_rational(other)?)),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(c) => write!(f, "{}", format_rational(c)),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

/// A set of places of the projective line: the zeros of a monic squarefree
/// polynomial, or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Number of geometric points.
    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(q) => q.degree().unwrap_or(0) as u32,
            Place::Infinity => 1,
        }
    }

    pub fn contains(&self, point: &Point) -> bool {
        match (self, point) {
            (Place::Finite(q), Point::Rational(c)) => q.eval(c).is_zero(),
            (Place::Infinity, Point::Infinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(q) => write!(f, "{q}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Places on which the valuations of `A`, `B` and the discriminant are
/// constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationCluster {
    pub place: Place,
    pub v_a: Valuation,
    pub v_b: Valuation,
    pub v_d: Valuation,
}

impl ValuationCluster {
    pub fn degree(&self) -> u32 {
        self.place.degree()
    }
}

/// Integer primitive part, trailing zeros dropped; empty for zero.
fn primitive(p: &Poly) -> Vec<BigInt> {
    let lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    content_free(ints)
}

fn content_free(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c /= &g;
        }
    }
    v
}

/// Primitive part of the pseudo-remainder of `a` by `b` (`deg a >= deg b`).
fn primitive_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.len() - 1;
        let t = r[top].clone();
        let shift = top - db;
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &t * bc;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        r = content_free(r);
    }
    content_free(r)
}

/// `4A^3 + 27B^2`.
pub fn discriminant(a: &Poly, b: &Poly) -> Poly {
    let four = Q::from_integer(4.into());
    let tw7 = Q::from_integer(27.into());
    &a.pow(3).scale(&four) + &b.pow(2).scale(&tw7)
}

/// Splits the squarefree `p` into pieces on which `v(f)` is constant.
/// Returns `(piece, v(f))` with non-constant monic pieces.
fn split_by_valuation(p: &Poly, f: &Poly) -> Result<Vec<(Poly, Valuation)>> {
    if f.is_zero() {
        return Ok(vec![(p.monic(), Valuation::Infinite)]);
    }
    let mut out = Vec::new();
    let mut rest = p.monic();
    let mut f = f.clone();
    let mut k = 0;
    while !rest.is_constant() {
        let g = rest.gcd(&f);
        let part = rest.div_exact(&g)?;
        if !part.is_constant() {
            out.push((part, Valuation::Finite(k)));
        }
        if g.is_constant() {
            break;
        }
        f = f.div_exact(&g)?;
        rest = g;
        k += 1;
    }
    Ok(out)
}

fn degree_deficit(p: &Poly, bound: u32, name: &str) -> Result<Valuation> {
    match p.degree() {
        None => Ok(Valuation::Infinite),
        Some(d) if d as u32 > bound => Err(Error::InvalidSurface(format!(
            "deg {name} = {d} exceeds {bound}"
        ))),
        Some(d) => Ok(Valuation::Finite(bound - d as u32)),
    }
}

/// Pairwise coprime clusters of the discriminant divisor of `(A, B)` on
/// `P^1` with line-bundle degree `n`, finite clusters first and the
/// infinity cluster last (always present).
pub fn uniform_clusters(a: &Poly, b: &Poly, n: u32) -> Result<Vec<ValuationCluster>> {
    let delta = discriminant(a, b);
    if delta.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let v_a_inf = degree_deficit(a, 4 * n, "A")?;
    let v_b_inf = degree_deficit(b, 6 * n, "B")?;
    let v_d_inf = degree_deficit(&delta, 12 * n, "4A^3 + 27B^2")?;
    let mut out = Vec::new();
    for (s, vd) in delta.squarefree_decomposition()? {
        for (sa, va) in split_by_valuation(&s, a)? {
            for (sb, vb) in split_by_valuation(&sa, b)? {
                out.push(ValuationCluster {
                    place: Place::Finite(sb),
                    v_a: va,
                    v_b: vb,
                    v_d: Valuation::Finite(vd),
                });
            }
        }
    }
    out.push(ValuationCluster {
        place: Place::Infinity,
        v_a: v_a_inf,
        v_b: v_b_inf,
        v_d: v_d_inf,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, -2, 1])), p(&[-1, 1]));
        assert_eq!(p(&[0, 0, 27, 4]).eval(&q(1, 1)), q(31, 1));
        let (quo, rem) = p(&[0, 0, 0, 1]).divrem(&p(&[-1, 1])).unwrap();
        assert_eq!(quo, p(&[1, 1, 1]));
        assert_eq!(rem, p(&[1]));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert!(matches!(
            p(&[1]).divrem(&Poly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn squarefree_examples() {
        // t^3 (t - 1)
        let f = &p(&[0, 0, 0, 1]) * &p(&[-1, 1]);
        assert_eq!(
            f.squarefree_decomposition().unwrap(),
            vec![(p(&[-1, 1]), 1), (p(&[0, 1]), 3)]
        );
        assert_eq!(
            p(&[1, 0, 1]).squarefree_decomposition().unwrap(),
            vec![(p(&[1, 0, 1]), 1)]
        );
        let f = &p(&[-2, 0, 1]).pow(2) * &p(&[1, 1]);
        assert_eq!(
            f.squarefree_decomposition().unwrap(),
            vec![(p(&[1, 1]), 1), (p(&[-2, 0, 1]), 2)]
        );
    }

    #[test]
    fn valuations_at_points() {
        let f = &p(&[0, 0, 1]) * &p(&[1, 1]);
        assert_eq!(f.valuation_at(&Point::integer(0), 0), 2);
        assert_eq!(p(&[1, 0, 1]).valuation_at(&Point::integer(1), 0), 0);
        assert_eq!(p(&[1, 0, 0, 1]).valuation_at(&Point::Infinity, 5), 2);
        assert_eq!(
            Poly::zero().valuation_at(&Point::integer(3), 0),
            Valuation::Infinite
        );
    }

    #[test]
    fn running_example_clusters() {
        let cl = uniform_clusters(&p(&[0, 1]), &p(&[0, 1]), 1).unwrap();
        assert_eq!(cl.len(), 3);
        let find = |poly: &Poly| {
            cl.iter()
                .find(|c| c.place == Place::Finite(poly.clone()))
                .unwrap()
        };
        let c0 = find(&p(&[0, 1]));
        assert_eq!(
            (c0.v_a, c0.v_b, c0.v_d),
            (1.into_v(), 1.into_v(), 2.into_v())
        );
        let c1 = find(&Poly::new(vec![q(27, 4), q(1, 1)]));
        assert_eq!(
            (c1.v_a, c1.v_b, c1.v_d),
            (0.into_v(), 0.into_v(), 1.into_v())
        );
        let inf = cl.last().unwrap();
        assert_eq!(inf.place, Place::Infinity);
        assert_eq!(
            (inf.v_a, inf.v_b, inf.v_d),
            (3.into_v(), 5.into_v(), 9.into_v())
        );
    }

    #[test]
    fn degenerate_infinity_clusters() {
        let cl = uniform_clusters(&Poly::zero(), &p(&[1]), 1).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(
            (cl[0].v_a, cl[0].v_b, cl[0].v_d),
            (Valuation::Infinite, 6.into_v(), 12.into_v())
        );
        let cl = uniform_clusters(&p(&[1]), &Poly::zero(), 1).unwrap();
        assert_eq!(
            (cl[0].v_a, cl[0].v_b, cl[0].v_d),
            (4.into_v(), Valuation::Infinite, 12.into_v())
        );
        assert!(matches!(
            uniform_clusters(&Poly::zero(), &Poly::zero(), 1),
            Err(Error::ZeroDiscriminant)
        ));
        assert!(uniform_clusters(&p(&[0, 0, 0, 0, 0, 1]), &p(&[1]), 1).is_err());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Poly::new(vec![q(27, 4), q(1, 1)]).to_string(), "t + 27/4");
        assert_eq!(p(&[-1, 0, -3]).to_string(), "-3*t^2 - 1");
        assert_eq!(
            Poly::from_strs(&["1/2", "-3"]).unwrap(),
            Poly::new(vec![q(1, 2), q(-3, 1)])
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(Point::parse("inf").unwrap(), Point::Infinity);
    }

    trait IntoV {
        fn into_v(self) -> Valuation;
    }
    impl IntoV for u32 {
        fn into_v(self) -> Valuation {
            Valuation::Finite(self)
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_poly() -> impl Strategy<Value = Poly> {
            prop::collection::vec(-4i64..=4, 0..5).prop_map(|c| Poly::from_i64s(&c))
        }

        proptest! {
            #[test]
            fn squarefree_reconstructs(
                f in small_poly(), g in small_poly(), h in small_poly(),
            ) {
                let prod = &(&f * &g.pow(2)) * &h.pow(3);
                prop_assume!(!prod.is_zero());
                let parts = prod.squarefree_decomposition().unwrap();
                let rebuilt = parts.iter().fold(Poly::one(), |acc, (s, i)| &acc * &s.pow(*i));
                prop_assert_eq!(rebuilt, prod.monic());
                for (i, (s, _)) in parts.iter().enumerate() {
                    prop_assert!(s.is_squarefree());
                    for (t, _) in &parts[i + 1..] {
                        prop_assert!(s.gcd(t).is_constant());
                    }
                }
            }

            #[test]
            fn divrem_identity(f in small_poly(), g in small_poly()) {
                prop_assume!(!g.is_zero());
                let (quo, rem) = f.divrem(&g).unwrap();
                prop_assert_eq!(&(&quo * &g) + &rem, f);
                prop_assert!(rem.is_zero() || rem.degree() < g.degree());
            }

            #[test]
            fn clusters_account_for_whole_divisor(
                a in prop::collection::vec(-3i64..=3, 0..5),
                b in prop::collection::vec(-3i64..=3, 0..7),
            ) {
                let (a, b) = (Poly::from_i64s(&a), Poly::from_i64s(&b));
                prop_assume!(!discriminant(&a, &b).is_zero());
                let cl = uniform_clusters(&a, &b, 1).unwrap();
                let total: u32 = cl.iter().map(|c| c.degree() * c.v_d.finite().unwrap()).sum();
                prop_assert_eq!(total, 12);
                let finite: Vec<&Poly> = cl.iter().filter_map(|c| match &c.place {
                    Place::Finite(q) => Some(q),
                    Place::Infinity => None,
                }).collect();
                for (i, x) in finite.iter().enumerate() {
                    for y in &finite[i + 1..] {
                        prop_assert!(x.gcd(y).is_constant());
                    }
                }
            }
        }
    }
}

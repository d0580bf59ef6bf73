//! Exact real quadratic surds `a + b·√d` with rational `a`, `b` and
//! squarefree `d ≥ 1`.
//!
//! Exclusion-interval endpoints live in real quadratic fields (the horoball
//! ratio is `(den′/den)·√δ`), and the covering bookkeeping must compare
//! endpoints drawn from *different* fields exactly. Comparison is done by
//! sign analysis and repeated squaring, never by floating point.

use crate::{Int, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `value = a + b·√d`; canonical form has `d` squarefree and `d = 1 ⟺ b = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: Int,
}

/// Split `n ≥ 0` as `s²·d` with `d` squarefree; returns `(s, d)`.
fn extract_square(n: &Int) -> (Int, Int) {
    assert!(!n.is_negative(), "radicand must be non-negative");
    if n.is_zero() {
        return (Int::zero(), Int::one());
    }
    let mut rest = n.clone();
    let mut s = Int::one();
    let mut d = Int::one();
    let mut p = Int::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            for _ in 0..e / 2 {
                s *= &p;
            }
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += 1;
    }
    // rest is 1 or a prime
    d *= rest;
    (s, d)
}

impl QuadExt {
    pub fn from_rat(a: Rat) -> Self {
        QuadExt {
            a,
            b: Rat::zero(),
            d: Int::one(),
        }
    }

    pub fn from_int(v: i64) -> Self {
        QuadExt::from_rat(Rat::from_integer(Int::from(v)))
    }

    /// Exact `√r` for rational `r ≥ 0`.
    pub fn sqrt_of_rat(r: &Rat) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        // √(p/q) = √(p·q) / q
        let pq = r.numer() * r.denom();
        let (s, d) = extract_square(&pq);
        QuadExt::new(Rat::zero(), Rat::new(s, r.denom().clone()), d)
    }

    /// Canonicalizing constructor for `a + b·√d` with `d ≥ 0` arbitrary.
    pub fn new(a: Rat, b: Rat, d: Int) -> Self {
        if b.is_zero() || d.is_zero() {
            return QuadExt::from_rat(a);
        }
        let (s, d) = extract_square(&d);
        if d.is_one() {
            return QuadExt::from_rat(a + b * Rat::from_integer(s));
        }
        QuadExt {
            a,
            b: b * Rat::from_integer(s),
            d,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rat(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn radical_part(&self) -> (&Rat, &Int) {
        (&self.b, &self.d)
    }

    fn same_field(&self, rhs: &QuadExt) -> Int {
        if self.b.is_zero() {
            rhs.d.clone()
        } else if rhs.b.is_zero() {
            self.d.clone()
        } else {
            assert_eq!(
                self.d, rhs.d,
                "mixed quadratic fields admit comparison only"
            );
            self.d.clone()
        }
    }

    pub fn sign(&self) -> Ordering {
        sign1(&self.a, &self.b, &self.d)
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn recip(&self) -> QuadExt {
        assert!(!self.is_zero(), "division by zero");
        // 1/(a + b√d) = (a - b√d)/(a² - b²d)
        let denom = &self.a * &self.a - &self.b * &self.b * Rat::from_integer(self.d.clone());
        assert!(!denom.is_zero(), "norm vanishes only at 0 for squarefree d");
        QuadExt::new(&self.a / &denom, -(&self.b / &denom), self.d.clone())
    }

    /// Decimal approximation used only by presentation-layer plotting.
    pub fn to_f64(&self) -> f64 {
        let rf = |r: &Rat| -> f64 {
            let n: f64 = num_traits::ToPrimitive::to_f64(r.numer()).unwrap_or(f64::NAN);
            let d: f64 = num_traits::ToPrimitive::to_f64(r.denom()).unwrap_or(f64::NAN);
            n / d
        };
        let df: f64 = num_traits::ToPrimitive::to_f64(&self.d).unwrap_or(f64::NAN);
        rf(&self.a) + rf(&self.b) * df.sqrt()
    }
}

/// sign of `r + b·√d`, `d` squarefree ≥ 1.
fn sign1(r: &Rat, b: &Rat, d: &Int) -> Ordering {
    if b.is_zero() {
        return r.cmp(&Rat::zero());
    }
    if d.is_one() {
        return (r + b).cmp(&Rat::zero());
    }
    let sr = r.cmp(&Rat::zero());
    let sb = b.cmp(&Rat::zero());
    if sr == Ordering::Equal {
        return sb;
    }
    if sr == sb {
        return sr;
    }
    // Opposite signs: compare r² against b²·d. The two magnitudes are never
    // equal (d > 1 squarefree), so the result is exact.
    let lhs = r * r;
    let rhs = b * b * Rat::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sr,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// sign of `r + b1·√d1 + b2·√d2` with both `dᵢ` squarefree ≥ 1.
fn sign2(r: &Rat, b1: &Rat, d1: &Int, b2: &Rat, d2: &Int) -> Ordering {
    if b1.is_zero() {
        return sign1(r, b2, d2);
    }
    if b2.is_zero() {
        return sign1(r, b1, d1);
    }
    if d1 == d2 {
        return sign1(r, &(b1 + b2), d1);
    }
    if d1.is_one() {
        return sign1(&(r + b1), b2, d2);
    }
    if d2.is_one() {
        return sign1(&(r + b2), b1, d1);
    }
    // t := b1√d1 + b2√d2 with d1 ≠ d2 both > 1: t is irrational and nonzero.
    let s1 = b1.cmp(&Rat::zero());
    let s2 = b2.cmp(&Rat::zero());
    let st = if s1 == s2 {
        s1
    } else {
        // |b1√d1| vs |b2√d2|
        match (b1 * b1 * Rat::from_integer(d1.clone()))
            .cmp(&(b2 * b2 * Rat::from_integer(d2.clone())))
        {
            Ordering::Greater => s1,
            Ordering::Less => s2,
            Ordering::Equal => {
                unreachable!("distinct squarefree radicands cannot have equal radicals")
            }
        }
    };
    let sr = r.cmp(&Rat::zero());
    if sr == Ordering::Equal {
        return st;
    }
    if sr == st {
        return sr;
    }
    // |t| vs |r|: square once; t² = b1²d1 + b2²d2 + 2·b1·b2·√(d1·d2).
    let t2_rat = b1 * b1 * Rat::from_integer(d1.clone()) + b2 * b2 * Rat::from_integer(d2.clone());
    let t2_rad = Rat::from_integer(Int::from(2)) * b1 * b2;
    let diff = sign1(&(t2_rat - r * r), &t2_rad, &(d1 * d2));
    match diff {
        Ordering::Greater => st,
        Ordering::Less => sr,
        // r + t = 0 would force t rational; unreachable for d1 ≠ d2 > 1.
        Ordering::Equal => unreachable!("sum of independent radicals cannot be rational"),
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        let r = &self.a - &other.a;
        sign2(&r, &self.b, &self.d, &(-other.b.clone()), &other.d)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let d = self.same_field(rhs);
        QuadExt::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let d = self.same_field(rhs);
        QuadExt::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let d = self.same_field(rhs);
        let dr = Rat::from_integer(d.clone());
        QuadExt::new(
            &self.a * &rhs.a + &self.b * &rhs.b * dr,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        )
    }
}

impl Div for &QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: &QuadExt) -> QuadExt {
        self * &rhs.recip()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}√{}", self.b, self.d)
        } else {
            write!(f, "{}+{}√{}", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

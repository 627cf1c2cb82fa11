//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// Canonical text: `n` or `n/d`.
pub fn render(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n`, `-n`, `n/d` (whitespace allowed around the slash).
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(qi(n))
    }
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn factorial(n: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 2..=n {
        r *= i;
    }
    r
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

pub fn midpoint(a: &Q, b: &Q) -> Q {
    (a + b) / q(2)
}

/// The rational with the smallest denominator in the closed interval `[a, b]`
/// (smallest absolute numerator among those).
pub fn simplest_between(a: &Q, b: &Q) -> Q {
    let (a, b) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    if a <= Q::zero() && b >= Q::zero() {
        return Q::zero();
    }
    if b < Q::zero() {
        return -simplest_between(&-b, &-a);
    }
    simplest_pos(&a, &b)
}

fn simplest_pos(a: &Q, b: &Q) -> Q {
    // 0 < a <= b
    let fl = a.floor();
    if fl == *a {
        return fl;
    }
    if fl.clone() + Q::one() <= *b {
        return fl + Q::one();
    }
    // a and b share the integer part; recurse on reciprocals of the fractional parts
    let fa = a - &fl;
    let fb = b - &fl;
    let inner = simplest_pos(&(Q::one() / fb), &(Q::one() / fa));
    fl + Q::one() / inner
}

/// Integer gcd of numerators and lcm of denominators, used to make primitive integer vectors.
pub fn lcm_denoms<'a>(it: impl Iterator<Item = &'a Q>) -> BigInt {
    let mut l = BigInt::one();
    for x in it {
        l = l.lcm(x.denom());
    }
    l
}

pub fn gcd_numers<'a>(it: impl Iterator<Item = &'a Q>) -> BigInt {
    let mut g = BigInt::zero();
    for x in it {
        g = g.gcd(x.numer());
    }
    g
}

/// Ceiling of log2 of a positive rational, as a power-of-two bound.
pub fn pow2_at_least(x: &Q) -> Q {
    let mut p = Q::one();
    let x = x.abs();
    while p < x {
        p *= q(2);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(parse("3/6").unwrap(), qf(1, 2));
        assert_eq!(render(&qf(-3, 6)), "-1/2");
        assert_eq!(render(&q(4)), "4");
        assert!(parse("1/0").is_none());
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&qf(1, 3), &qf(1, 2)), qf(1, 2));
        assert_eq!(simplest_between(&qf(3, 10), &qf(4, 10)), qf(1, 3));
        assert_eq!(simplest_between(&qf(-7, 2), &qf(-3, 1)), q(-3));
        assert_eq!(simplest_between(&qf(-1, 2), &qf(1, 2)), q(0));
        assert_eq!(simplest_between(&qf(141, 100), &qf(142, 100)), qf(17, 12));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}

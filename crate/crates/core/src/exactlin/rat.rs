use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational. `BigRational` keeps values in lowest terms
/// with a positive denominator, which is exactly the canonical form we need.
pub type Rat = BigRational;

/// Integer constant as a rational.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// `p/q` as a rational; panics on `q = 0`.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders `p/q` without a decimal point; integers drop the `/1`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the `format_rat` form back. Accepts `"3"`, `"-3"`, `"3/4"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}

/// `r^k` for a signed integer exponent; `r` must be nonzero when `k < 0`.
pub fn pow_i(r: &Rat, k: i64) -> Rat {
    let mut out = Rat::one();
    let base = if k < 0 { r.recip() } else { r.clone() };
    for _ in 0..k.unsigned_abs() {
        out *= &base;
    }
    out
}

/// Exact square root if the rational is a perfect square, else `None`.
pub fn sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = rat_frac(4, -6);
        assert_eq!(format_rat(&r), "-2/3");
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-7", "22/7", "-3/5"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn integer_powers() {
        assert_eq!(pow_i(&rat_frac(2, 3), -2), rat_frac(9, 4));
        assert_eq!(pow_i(&rat(5), 0), rat(1));
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(sqrt_exact(&rat_frac(9, 4)), Some(rat_frac(3, 2)));
        assert_eq!(sqrt_exact(&rat(2)), None);
        assert_eq!(sqrt_exact(&rat(-4)), None);
    }
}

//! Integer primality and factorization: trial division plus Pollard rho with
//! an explicit iteration bound. Failures are surfaced as errors, never
//! swallowed.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Int;
use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 100_000;
const RHO_ITER_BOUND: u64 = 1 << 24;

fn mod_pow(base: &Int, exp: &Int, m: &Int) -> Int {
    if m.is_one() {
        return Int::zero();
    }
    let mut result = Int::one();
    let mut b = base.mod_floor(m);
    let mut e = exp.clone();
    while e.is_positive() {
        if e.is_odd() {
            result = (&result * &b).mod_floor(m);
        }
        b = (&b * &b).mod_floor(m);
        e >>= 1;
    }
    result
}

/// Miller-Rabin with the deterministic witness set for u64 plus fixed extra
/// bases for larger inputs (deterministic across runs).
pub fn is_prime(n: &Int) -> bool {
    if n <= &Int::one() {
        return false;
    }
    let small: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &small {
        let qi = Int::from(q);
        if n == &qi {
            return true;
        }
        if n.mod_floor(&qi).is_zero() {
            return false;
        }
    }
    let n1: Int = n - 1;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let witnesses: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    'outer: for &a in &witnesses {
        let mut x = mod_pow(&Int::from(a), &d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x).mod_floor(n);
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &Int) -> Option<Int> {
    // Brent's cycle detection with a fixed deterministic seed schedule.
    for c in 1u64..20 {
        let ci = Int::from(c);
        let f = |x: &Int| (x * x + &ci).mod_floor(n);
        let mut x = Int::from(2);
        let mut y = x.clone();
        let mut d = Int::one();
        let mut count = 0u64;
        let mut saved = Int::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break;
            }
            saved = (&saved * &diff).mod_floor(n);
            count += 1;
            if count % 128 == 0 {
                d = saved.gcd(n);
                saved = Int::one();
            }
            if count > RHO_ITER_BOUND {
                return None;
            }
        }
        if d.is_one() {
            d = saved.gcd(n);
        }
        if !d.is_one() && &d != n {
            return Some(d);
        }
    }
    None
}

/// Full factorization of |n| into (prime, exponent) pairs sorted by prime.
/// Errors with the unfactored cofactor when the rho bound is exceeded.
pub fn factorize(n: &Int) -> Result<Vec<(Int, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::InvalidInput("factorize(0)".into()));
    }
    let mut out: Vec<(Int, u32)> = Vec::new();
    let push = |p: Int, k: u32, out: &mut Vec<(Int, u32)>| {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += k;
        } else {
            out.push((p, k));
        }
    };
    // trial division
    let mut d = 2u64;
    while d < TRIAL_BOUND {
        let di = Int::from(d);
        if &di * &di > n {
            break;
        }
        let mut k = 0u32;
        loop {
            let (q, r) = n.div_rem(&di);
            if r.is_zero() {
                n = q;
                k += 1;
            } else {
                break;
            }
        }
        if k > 0 {
            push(di, k, &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // recursive rho on what remains
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, 1, &mut out);
            continue;
        }
        // perfect power check keeps rho off squares
        if let Some(r) = m.sqrt().to_biguint() {
            let r: Int = r.into();
            if &r * &r == m {
                stack.push(r.clone());
                stack.push(r);
                continue;
            }
        }
        match pollard_rho(&m) {
            Some(d) => {
                let q = &m / &d;
                stack.push(d);
                stack.push(q);
            }
            None => return Err(Error::NormNotFactorable(m.to_string())),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// The prime as u64, required by the finite-field layer.
pub fn prime_to_u64(p: &Int) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    p.to_u64().ok_or_else(|| Error::PrimeTooLarge(p.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(&Int::from(2)));
        assert!(is_prime(&Int::from(137679681521u64)));
        assert!(is_prime(&Int::from(4759427)));
        assert!(!is_prime(&Int::from(391987i64 * 4759427)));
        assert!(!is_prime(&Int::one()));
    }

    #[test]
    fn factor_small_and_medium() {
        let n = Int::from(2u64).pow(10) * Int::from(391987) * Int::from(4759427);
        let f = factorize(&n).unwrap();
        assert_eq!(
            f,
            vec![
                (Int::from(2), 10),
                (Int::from(391987), 1),
                (Int::from(4759427), 1)
            ]
        );
    }

    #[test]
    fn factor_square() {
        let p = Int::from(1000003);
        let f = factorize(&(&p * &p)).unwrap();
        assert_eq!(f, vec![(p, 2)]);
    }
}

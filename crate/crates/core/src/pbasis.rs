//! Local exponents, Okutsu local bases, p-integral bases and the p-index of
//! the defining polynomial.

use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{AlgElem, Int, IntPoly, NumberField, Rat};
use crate::error::{Error, Result};
use crate::ideal::multipliers;
use crate::montes::{montes_factorize, Decomposition, PrimeIdeal};
use crate::omtype::pow_int;
use crate::valuation::{cross_value, value_of_phi};

/// Okutsu basis of the local ring at a prime: numerators g_m of degree m and
/// denominator exponents nu_m, for m = 0..n_P-1.
#[derive(Clone, Debug)]
pub struct LocalBasis {
    pub numerators: Vec<IntPoly>,
    pub denominators: Vec<i64>,
}

/// mu_P = sum over the levels below the terminal of
/// (e_i f_i ... e_r f_r - 1) h_i / (e_1..e_i), an Okutsu invariant.
fn mu_p(pr: &PrimeIdeal) -> Rat {
    let r = pr.order();
    let mut mu = Rat::zero();
    for i in 1..=r {
        let mut tailprod = 1i64;
        for k in i..=r {
            let lv = pr.om.level(k);
            tailprod *= lv.e * lv.f as i64;
        }
        let lv = pr.om.level(i);
        let den = pr.om.e_prod_up_to(i);
        mu += Rat::from_integer(Int::from(tailprod - 1))
            * Rat::new(Int::from(lv.h), Int::from(den));
    }
    mu
}

/// The least k with p^k times the local maximal order inside Z_p[theta_P]:
/// floor(mu_P). Computed both from the closed form and from the last
/// denominator of the Okutsu basis; disagreement is a hard error.
pub fn local_exponent(pr: &PrimeIdeal) -> Result<i64> {
    let closed = mu_p(pr).floor().to_integer().to_i64().unwrap();
    let basis = okutsu_local_basis(pr);
    let from_basis = *basis.denominators.last().unwrap();
    if closed != from_basis {
        return Err(Error::Internal(format!(
            "local exponent mismatch: closed form {} vs basis {}",
            closed, from_basis
        )));
    }
    Ok(closed)
}

/// Numerators by mixed-radix digits over the degree chain 1 = m_0 | m_1 |
/// ... | m_{r+1} = n_P, denominators as floors of the exact values.
pub fn okutsu_local_basis(pr: &PrimeIdeal) -> LocalBasis {
    let r = pr.order();
    let n_p = pr.local_degree();
    // degree chain: m_0 = 1, then the level degrees, then n_P
    let mut ms: Vec<usize> = vec![1];
    for i in 1..=r {
        ms.push(pr.om.level(i).m);
    }
    ms.push(n_p);
    // value of x never contributes: a_0 > 0 forces f_0 >= 2, where theta is
    // a unit at P
    let phi_values: Vec<Rat> = (1..=r).map(|i| value_of_phi(pr, i)).collect();
    let mut numerators = Vec::with_capacity(n_p);
    let mut denominators = Vec::with_capacity(n_p);
    for m in 0..n_p {
        let mut g = IntPoly::one();
        let mut val = Rat::zero();
        for i in 0..=r {
            let base = ms[i + 1] / ms[i];
            let digit = (m / ms[i]) % base;
            if digit == 0 {
                continue;
            }
            if i == 0 {
                g = g.mul(&IntPoly::monomial(digit));
            } else {
                g = g.mul(&pr.om.level(i).phi.pow(digit));
                val += Rat::from_integer(Int::from(digit as u64)) * phi_values[i - 1].clone();
            }
        }
        debug_assert_eq!(g.deg(), m);
        numerators.push(g);
        denominators.push(val.floor().to_integer().to_i64().unwrap());
    }
    LocalBasis { numerators, denominators }
}

/// n integral elements spanning Z_K up to index prime to p. When the p-index
/// of f vanishes this is the power basis.
pub fn p_integral_basis(nf: &Arc<NumberField>, p: &Int) -> Result<Vec<AlgElem>> {
    let d = montes_factorize(nf, p)?;
    p_integral_basis_from(nf, &d)
}

pub fn p_integral_basis_from(nf: &Arc<NumberField>, d: &Decomposition) -> Result<Vec<AlgElem>> {
    if local_index_from(d)? == 0 {
        return Ok((0..nf.degree()).map(|k| nf.elem_from_poly(IntPoly::monomial(k))).collect());
    }
    let mut primes = d.primes.clone();
    let n = primes.len();
    let mut shift = vec![0i64; n];
    for (idx, s) in shift.iter_mut().enumerate() {
        *s = local_exponent(&primes[idx])? + 1;
    }
    let targets = vec![0i64; n];
    let bs = multipliers(&mut primes, &targets, &shift)?;
    let mut out = Vec::with_capacity(nf.degree());
    for (idx, b) in bs.iter().enumerate() {
        let basis = okutsu_local_basis(&primes[idx]);
        for (g, nu) in basis.numerators.iter().zip(basis.denominators.iter()) {
            let el = nf.elem(
                Rat::new(Int::from(1), pow_int(&d.p, *nu)),
                g.clone(),
            );
            out.push(nf.mul(b, &el));
        }
    }
    if out.len() != nf.degree() {
        return Err(Error::Internal("basis has the wrong cardinality".into()));
    }
    Ok(out)
}

/// v_p(ind f) from the stored invariants: the sum of the local denominator
/// exponents plus the pairwise cross terms f(Q) v_Q(phi_P(theta)) at the
/// terminal levels (stable under approximation improvement).
pub fn local_index(nf: &Arc<NumberField>, p: &Int) -> Result<i64> {
    let d = montes_factorize(nf, p)?;
    local_index_from(&d)
}

pub fn local_index_from(d: &Decomposition) -> Result<i64> {
    let mut total = Rat::zero();
    for pr in &d.primes {
        let basis = okutsu_local_basis(pr);
        let s: i64 = basis.denominators.iter().sum();
        total += Rat::from_integer(Int::from(s));
    }
    for a in 0..d.primes.len() {
        for b in 0..d.primes.len() {
            if a >= b {
                continue;
            }
            let pq = &d.primes[a];
            let qq = &d.primes[b];
            // f(Q) e(Q) * v(phi_P(theta_Q)) for the unordered pair
            let rp1 = pq.om.levels.len();
            let cv = cross_value(qq, pq, rp1)?;
            total += Rat::from_integer(Int::from(qq.f * qq.e)) * cv;
        }
    }
    if !total.denom().is_one() {
        return Err(Error::Internal(format!("p-index is not an integer: {}", total)));
    }
    total
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Internal("p-index overflow".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int_val_p, resultant};
    use crate::valuation::vp;

    fn field(cs: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new(IntPoly::from_i64(cs)).unwrap())
    }

    #[test]
    fn ramified_quadratic_basis() {
        let nf = field(&[2, 0, 1]);
        let d = montes_factorize(&nf, &Int::from(2)).unwrap();
        let pr = &d.primes[0];
        // mu = (2 - 1) * 1/2, exp = 0
        assert_eq!(local_exponent(pr).unwrap(), 0);
        let b = okutsu_local_basis(pr);
        assert_eq!(b.numerators, vec![IntPoly::one(), IntPoly::x()]);
        assert_eq!(b.denominators, vec![0, 0]);
        assert_eq!(local_index_from(&d).unwrap(), 0);
        // power basis since the index vanishes
        let basis = p_integral_basis_from(&nf, &d).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[1], nf.theta());
    }

    #[test]
    fn depth_zero_prime() {
        let nf = field(&[1, 0, 1]);
        let d = montes_factorize(&nf, &Int::from(3)).unwrap();
        assert_eq!(local_exponent(&d.primes[0]).unwrap(), 0);
        let b = okutsu_local_basis(&d.primes[0]);
        assert_eq!(b.numerators.len(), 2);
        assert_eq!(b.denominators, vec![0, 0]);
    }

    /// Exact determinant of the coordinate matrix of a basis over the power
    /// basis, as a rational (test oracle).
    fn basis_det(nf: &Arc<NumberField>, basis: &[AlgElem]) -> Rat {
        let n = nf.degree();
        let mut m: Vec<Vec<Rat>> = basis.iter().map(|b| b.rational_coeffs(n)).collect();
        let mut det = Rat::from_integer(Int::from(1));
        for k in 0..n {
            let piv = (k..n).find(|&r| !m[r][k].is_zero());
            let piv = match piv {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if piv != k {
                m.swap(piv, k);
                det = -det;
            }
            let pv = m[k][k].clone();
            det *= pv.clone();
            for r in k + 1..n {
                if m[r][k].is_zero() {
                    continue;
                }
                let c = m[r][k].clone() / pv.clone();
                for c2 in k..n {
                    let t = m[k][c2].clone() * c.clone();
                    m[r][c2] = m[r][c2].clone() - t;
                }
            }
        }
        det
    }

    /// The index from the invariants must equal the p-valuation lost by the
    /// basis determinant, and the basis must be integral everywhere over p.
    fn check_field_at(nf: &Arc<NumberField>, p: i64) {
        let pint = Int::from(p);
        let d = montes_factorize(nf, &pint).unwrap();
        let idx = local_index_from(&d).unwrap();
        let basis = p_integral_basis_from(nf, &d).unwrap();
        let det = basis_det(nf, &basis);
        assert!(!det.is_zero());
        let vdet = crate::arith::val_p(&det, &pint).unwrap();
        assert_eq!(idx, -vdet, "field {:?} p {}", nf.poly(), p);
        for b in &basis {
            for pr in &d.primes {
                let mut c = pr.clone();
                assert!(vp(&mut c, b).unwrap() >= 0);
            }
        }
        // exp identity against each prime
        for pr in &d.primes {
            local_exponent(pr).unwrap();
        }
        // triangle: index = -v_p(det); additionally 2*index + v_p(disc basis)
        // must equal val_p(Res(f, f'))
        if nf.degree() <= 8 {
            let res = resultant(nf.poly(), &nf.poly().derivative()).unwrap();
            let vres = int_val_p(&res, &pint);
            let vdisc_basis = vres + 2 * vdet;
            assert_eq!(2 * idx + vdisc_basis, vres);
            assert!(vdisc_basis >= 0);
        }
    }

    #[test]
    fn index_matches_determinant() {
        for (cs, ps) in [
            (&[2i64, 0, 1][..], &[2i64, 3][..]),
            (&[-2, 0, 0, 1], &[2, 3, 5]),
            (&[4, 0, 2, 0, 1], &[2]),
            (&[3, 1, 0, 0, 1], &[3]),
            (&[8, 0, 0, 0, 1], &[2]),
            (&[9, 3, 0, 1], &[3]),
        ] {
            let nf = field(cs);
            for &p in ps {
                check_field_at(&nf, p);
            }
        }
    }
}

//! Finite-field towers F_0 = GF(p) < F_1 < ... with F_{i+1} = F_i[y]/(psi_i),
//! element and polynomial arithmetic at every level, univariate factorization
//! (distinct degree + equal degree splitting with a fixed-seed deterministic
//! RNG), and deterministic lifting to integer polynomials using least
//! non-negative residues.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::arith::{Int, IntPoly};
use crate::error::{Error, Result};

/// Element of some tower level. Level 0 elements are residues mod p; an
/// element of level L >= 1 is a fixed-length vector (length f_{L-1}) of
/// level L-1 elements, fully reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FFElem {
    Base(u64),
    Ext(Vec<FFElem>),
}

/// Polynomial over the field at `level`, dense, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FFPoly {
    pub level: usize,
    pub coeffs: Vec<FFElem>,
}

impl FFPoly {
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[derive(Clone, Debug)]
struct TowerLevel {
    psi: FFPoly, // over the previous level
    f: usize,
}

/// The tower. Field level k has p^(f_0 * ... * f_{k-1}) elements.
#[derive(Clone, Debug)]
pub struct TowerField {
    p: u64,
    levels: Vec<TowerLevel>,
}

/// Deterministic splittable RNG for equal-degree factorization.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}

impl TowerField {
    pub fn new(p: u64) -> TowerField {
        assert!(p >= 2);
        TowerField { p, levels: vec![] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_int(&self) -> Int {
        Int::from(self.p)
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn psi(&self, k: usize) -> &FFPoly {
        &self.levels[k].psi
    }

    pub fn ext_degree(&self, k: usize) -> usize {
        self.levels[k].f
    }

    /// Number of elements of the field at `level`, as a big integer.
    pub fn card(&self, level: usize) -> Int {
        let mut q = Int::from(self.p);
        let mut acc = Int::one();
        for l in self.levels.iter().take(level) {
            acc = Int::from(l.f as u64) * acc;
        }
        // p^(prod f)
        let mut e = acc;
        let mut result = Int::one();
        while e.is_positive() {
            if e.is_odd() {
                result *= &q;
            }
            q = &q * &q;
            e >>= 1;
        }
        result
    }

    // ---- element arithmetic -------------------------------------------------

    pub fn zero(&self, level: usize) -> FFElem {
        if level == 0 {
            FFElem::Base(0)
        } else {
            let f = self.levels[level - 1].f;
            FFElem::Ext(vec![self.zero(level - 1); f])
        }
    }

    pub fn one(&self, level: usize) -> FFElem {
        self.scalar(level, 1)
    }

    /// Embed a residue mod p at the given level.
    pub fn scalar(&self, level: usize, c: u64) -> FFElem {
        if level == 0 {
            FFElem::Base(c % self.p)
        } else {
            let f = self.levels[level - 1].f;
            let mut v = vec![self.zero(level - 1); f];
            v[0] = self.scalar(level - 1, c);
            FFElem::Ext(v)
        }
    }

    pub fn is_zero_elem(&self, a: &FFElem) -> bool {
        match a {
            FFElem::Base(x) => *x == 0,
            FFElem::Ext(v) => v.iter().all(|c| self.is_zero_elem(c)),
        }
    }

    pub fn add(&self, level: usize, a: &FFElem, b: &FFElem) -> FFElem {
        match (a, b) {
            (FFElem::Base(x), FFElem::Base(y)) => FFElem::Base((x + y) % self.p),
            (FFElem::Ext(v), FFElem::Ext(w)) => FFElem::Ext(
                v.iter()
                    .zip(w.iter())
                    .map(|(x, y)| self.add(level - 1, x, y))
                    .collect(),
            ),
            _ => unreachable!("level mismatch"),
        }
    }

    pub fn neg(&self, level: usize, a: &FFElem) -> FFElem {
        match a {
            FFElem::Base(x) => FFElem::Base((self.p - x) % self.p),
            FFElem::Ext(v) => FFElem::Ext(v.iter().map(|x| self.neg(level - 1, x)).collect()),
        }
    }

    pub fn sub(&self, level: usize, a: &FFElem, b: &FFElem) -> FFElem {
        self.add(level, a, &self.neg(level, b))
    }

    pub fn mul(&self, level: usize, a: &FFElem, b: &FFElem) -> FFElem {
        match (a, b) {
            (FFElem::Base(x), FFElem::Base(y)) => {
                FFElem::Base(((*x as u128 * *y as u128) % self.p as u128) as u64)
            }
            (FFElem::Ext(v), FFElem::Ext(w)) => {
                let sub = level - 1;
                let pa = self.vec_to_poly(sub, v);
                let pb = self.vec_to_poly(sub, w);
                let prod = self.poly_mul(&pa, &pb);
                let red = self.poly_rem(&prod, &self.levels[sub].psi);
                FFElem::Ext(self.poly_to_vec(sub, &red))
            }
            _ => unreachable!("level mismatch"),
        }
    }

    pub fn inv(&self, level: usize, a: &FFElem) -> FFElem {
        assert!(!self.is_zero_elem(a), "inverse of zero");
        match a {
            FFElem::Base(x) => FFElem::Base(self.base_inv(*x)),
            FFElem::Ext(v) => {
                let sub = level - 1;
                let pa = self.vec_to_poly(sub, v);
                let psi = self.levels[sub].psi.clone();
                let (g, s, _) = self.poly_ext_gcd(&pa, &psi);
                // g is a nonzero constant (psi irreducible)
                debug_assert_eq!(g.degree(), Some(0));
                let ginv = self.inv(sub, &g.coeffs[0]);
                let inv = self.poly_scale(&s, &ginv);
                let red = self.poly_rem(&inv, &self.levels[sub].psi);
                FFElem::Ext(self.poly_to_vec(sub, &red))
            }
        }
    }

    fn base_inv(&self, x: u64) -> u64 {
        // Fermat
        let mut e = self.p - 2;
        let mut base = x % self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * base as u128) % self.p as u128) as u64;
            }
            base = ((base as u128 * base as u128) % self.p as u128) as u64;
            e >>= 1;
        }
        acc
    }

    pub fn pow_i64(&self, level: usize, a: &FFElem, e: i64) -> FFElem {
        if e < 0 {
            return self.pow_i64(level, &self.inv(level, a), -e);
        }
        let mut acc = self.one(level);
        let mut base = a.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(level, &acc, &base);
            }
            base = self.mul(level, &base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, level: usize, a: &FFElem, e: &Int) -> FFElem {
        assert!(!e.is_negative());
        let mut acc = self.one(level);
        let mut base = a.clone();
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                acc = self.mul(level, &acc, &base);
            }
            base = self.mul(level, &base, &base);
            e >>= 1;
        }
        acc
    }

    /// Embed an element living at `from` into the field at `to >= from`.
    pub fn embed(&self, a: &FFElem, from: usize, to: usize) -> FFElem {
        let mut cur = a.clone();
        for lvl in from..to {
            let f = self.levels[lvl].f;
            let mut v = vec![self.zero(lvl); f];
            v[0] = cur;
            cur = FFElem::Ext(v);
        }
        cur
    }

    /// Inverse of `embed`; errors if the element does not lie in the smaller
    /// field.
    pub fn project(&self, a: &FFElem, from: usize, to: usize) -> Result<FFElem> {
        let mut cur = a.clone();
        for lvl in (to..from).rev() {
            match cur {
                FFElem::Ext(mut v) => {
                    for hi in v.iter().skip(1) {
                        if !self.is_zero_elem(hi) {
                            return Err(Error::Internal(format!(
                                "element is not contained in tower level {}",
                                to
                            )));
                        }
                    }
                    cur = v.swap_remove(0);
                    let _ = lvl;
                }
                FFElem::Base(_) => unreachable!("level mismatch"),
            }
        }
        Ok(cur)
    }

    /// The canonical generator z_{k-1} of level k, i.e. the class of y in
    /// F_{k-1}[y]/(psi_{k-1}).
    pub fn gen(&self, k: usize) -> FFElem {
        assert!(k >= 1);
        let sub = k - 1;
        let psi = &self.levels[sub].psi;
        if self.levels[sub].f == 1 {
            // y reduces to -psi[0]
            let c = self.neg(sub, &psi.coeffs[0]);
            FFElem::Ext(vec![c])
        } else {
            let mut v = vec![self.zero(sub); self.levels[sub].f];
            v[1] = self.one(sub);
            FFElem::Ext(v)
        }
    }

    /// Coordinates of a level-k element over level k-1 (length f_{k-1}).
    pub fn coords<'a>(&self, a: &'a FFElem) -> &'a [FFElem] {
        match a {
            FFElem::Ext(v) => v,
            FFElem::Base(_) => panic!("coords of a base element"),
        }
    }

    /// Flatten to a canonical vector of base residues (for ordering and
    /// serialization).
    pub fn flatten(&self, a: &FFElem, out: &mut Vec<u64>) {
        match a {
            FFElem::Base(x) => out.push(*x),
            FFElem::Ext(v) => {
                for c in v {
                    self.flatten(c, out);
                }
            }
        }
    }

    pub fn flatten_poly(&self, g: &FFPoly) -> Vec<u64> {
        let mut out = Vec::new();
        for c in &g.coeffs {
            self.flatten(c, &mut out);
        }
        out
    }

    // ---- polynomial arithmetic over a level ---------------------------------

    fn vec_to_poly(&self, level: usize, v: &[FFElem]) -> FFPoly {
        let mut coeffs = v.to_vec();
        while coeffs.last().map_or(false, |c| self.is_zero_elem(c)) {
            coeffs.pop();
        }
        FFPoly { level, coeffs }
    }

    fn poly_to_vec(&self, level: usize, g: &FFPoly) -> Vec<FFElem> {
        let f = if level == self.levels.len() {
            g.coeffs.len()
        } else {
            // vector length for the extension defined over this level
            self.level_len(level)
        };
        let mut v = g.coeffs.clone();
        while v.len() < f {
            v.push(self.zero(level));
        }
        v
    }

    fn level_len(&self, level: usize) -> usize {
        self.levels[level].f
    }

    pub fn poly_zero(&self, level: usize) -> FFPoly {
        FFPoly { level, coeffs: vec![] }
    }

    pub fn poly_one(&self, level: usize) -> FFPoly {
        FFPoly { level, coeffs: vec![self.one(level)] }
    }

    pub fn poly_new(&self, level: usize, mut coeffs: Vec<FFElem>) -> FFPoly {
        while coeffs.last().map_or(false, |c| self.is_zero_elem(c)) {
            coeffs.pop();
        }
        FFPoly { level, coeffs }
    }

    pub fn poly_y(&self, level: usize) -> FFPoly {
        FFPoly { level, coeffs: vec![self.zero(level), self.one(level)] }
    }

    pub fn poly_coeff(&self, g: &FFPoly, k: usize) -> FFElem {
        g.coeffs.get(k).cloned().unwrap_or_else(|| self.zero(g.level))
    }

    pub fn poly_add(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let level = a.level;
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.add(level, &self.poly_coeff(a, k), &self.poly_coeff(b, k)));
        }
        self.poly_new(level, out)
    }

    pub fn poly_sub(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        self.poly_add(a, &self.poly_neg(b))
    }

    pub fn poly_neg(&self, a: &FFPoly) -> FFPoly {
        FFPoly {
            level: a.level,
            coeffs: a.coeffs.iter().map(|c| self.neg(a.level, c)).collect(),
        }
    }

    pub fn poly_mul(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let level = a.level;
        if a.is_zero() || b.is_zero() {
            return self.poly_zero(level);
        }
        let mut out = vec![self.zero(level); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if self.is_zero_elem(ca) {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if self.is_zero_elem(cb) {
                    continue;
                }
                let t = self.mul(level, ca, cb);
                out[i + j] = self.add(level, &out[i + j], &t);
            }
        }
        self.poly_new(level, out)
    }

    pub fn poly_scale(&self, a: &FFPoly, c: &FFElem) -> FFPoly {
        if self.is_zero_elem(c) {
            return self.poly_zero(a.level);
        }
        FFPoly {
            level: a.level,
            coeffs: a.coeffs.iter().map(|x| self.mul(a.level, x, c)).collect(),
        }
    }

    pub fn poly_divmod(&self, a: &FFPoly, b: &FFPoly) -> (FFPoly, FFPoly) {
        let level = a.level;
        assert!(!b.is_zero(), "division by zero polynomial");
        let db = b.deg();
        if a.is_zero() || a.deg() < db {
            return (self.poly_zero(level), a.clone());
        }
        let lcinv = self.inv(level, b.coeffs.last().unwrap());
        let mut rem = a.coeffs.clone();
        let n = rem.len();
        let mut quo = vec![self.zero(level); n - db];
        for k in (db..n).rev() {
            let c = self.mul(level, &rem[k], &lcinv);
            if self.is_zero_elem(&c) {
                continue;
            }
            rem[k] = self.zero(level);
            for j in 0..db {
                let t = self.mul(level, &c, &b.coeffs[j]);
                rem[k - db + j] = self.sub(level, &rem[k - db + j], &t);
            }
            quo[k - db] = c;
        }
        rem.truncate(db);
        (self.poly_new(level, quo), self.poly_new(level, rem))
    }

    pub fn poly_rem(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        self.poly_divmod(a, b).1
    }

    pub fn poly_monic(&self, a: &FFPoly) -> FFPoly {
        if a.is_zero() {
            return a.clone();
        }
        let lc = a.coeffs.last().unwrap();
        if self.is_zero_elem(&self.sub(a.level, lc, &self.one(a.level))) {
            return a.clone();
        }
        let inv = self.inv(a.level, lc);
        self.poly_scale(a, &inv)
    }

    pub fn poly_gcd(&self, a: &FFPoly, b: &FFPoly) -> FFPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    /// Extended gcd: returns (g, s, t) with s*a + t*b = g.
    fn poly_ext_gcd(&self, a: &FFPoly, b: &FFPoly) -> (FFPoly, FFPoly, FFPoly) {
        let level = a.level;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.poly_one(level), self.poly_zero(level));
        let (mut t0, mut t1) = (self.poly_zero(level), self.poly_one(level));
        while !r1.is_zero() {
            let (q, r) = self.poly_divmod(&r0, &r1);
            let ns = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let nt = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, ns);
            t0 = std::mem::replace(&mut t1, nt);
        }
        (r0, s0, t0)
    }

    pub fn poly_pow_mod(&self, base: &FFPoly, e: &Int, m: &FFPoly) -> FFPoly {
        let mut acc = self.poly_one(base.level);
        let mut b = self.poly_rem(base, m);
        let mut e = e.clone();
        while e.is_positive() {
            if e.is_odd() {
                acc = self.poly_rem(&self.poly_mul(&acc, &b), m);
            }
            b = self.poly_rem(&self.poly_mul(&b, &b), m);
            e >>= 1;
        }
        acc
    }

    pub fn poly_eval(&self, g: &FFPoly, at_level: usize, x: &FFElem) -> FFElem {
        // Horner; coefficients are embedded up to at_level.
        let mut acc = self.zero(at_level);
        for c in g.coeffs.iter().rev() {
            let ce = self.embed(c, g.level, at_level);
            acc = self.add(at_level, &self.mul(at_level, &acc, x), &ce);
        }
        acc
    }

    pub fn poly_derivative(&self, g: &FFPoly) -> FFPoly {
        if g.coeffs.len() <= 1 {
            return self.poly_zero(g.level);
        }
        let out: Vec<FFElem> = g
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let ks = self.scalar(g.level, (k as u64) % self.p);
                self.mul(g.level, c, &ks)
            })
            .collect();
        self.poly_new(g.level, out)
    }

    // ---- tower construction --------------------------------------------------

    /// Extend the tower by a monic irreducible psi over the current top
    /// level. Irreducibility is verified; for levels >= 1 the polynomial y is
    /// rejected.
    pub fn extend(&self, psi: &FFPoly) -> Result<TowerField> {
        if psi.is_zero() || !self.poly_is_monic(psi) {
            return Err(Error::NotMonic);
        }
        if psi.level != self.levels.len() {
            return Err(Error::Internal("psi at the wrong tower level".into()));
        }
        if psi.level >= 1 && psi.deg() == 1 && self.is_zero_elem(&psi.coeffs[0]) {
            return Err(Error::InvalidInput("psi = y is not allowed above level 0".into()));
        }
        if !self.is_irreducible(psi) {
            return Err(Error::Reducible);
        }
        Ok(self.extend_unchecked(psi))
    }

    /// Internal extension path for factors already known irreducible.
    pub fn extend_unchecked(&self, psi: &FFPoly) -> TowerField {
        let mut t = self.clone();
        t.levels.push(TowerLevel { psi: psi.clone(), f: psi.deg() });
        t
    }

    pub fn poly_is_monic(&self, g: &FFPoly) -> bool {
        match g.coeffs.last() {
            None => false,
            Some(lc) => self.is_zero_elem(&self.sub(g.level, lc, &self.one(g.level))),
        }
    }

    /// Frobenius irreducibility criterion over the field at g.level.
    pub fn is_irreducible(&self, g: &FFPoly) -> bool {
        if g.is_zero() {
            return false;
        }
        let d = g.deg();
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let g = self.poly_monic(g);
        let q = self.card(g.level);
        let y = self.poly_y(g.level);
        // y^(q^d) == y mod g
        let mut power = y.clone();
        let mut powers = Vec::with_capacity(d);
        for _ in 0..d {
            power = self.poly_pow_mod(&power, &q, &g);
            powers.push(power.clone());
        }
        if self.poly_sub(&powers[d - 1], &y).is_zero() == false {
            return false;
        }
        // for each prime l | d: gcd(y^{q^{d/l}} - y, g) must be 1
        let mut m = d;
        let mut primes = vec![];
        let mut f = 2;
        while f * f <= m {
            if m % f == 0 {
                primes.push(f);
                while m % f == 0 {
                    m /= f;
                }
            }
            f += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for l in primes {
            let sub = self.poly_sub(&powers[d / l - 1], &y);
            let gcd = self.poly_gcd(&sub, &g);
            if gcd.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    // ---- factorization -------------------------------------------------------

    /// Factor a nonzero polynomial over its level into monic irreducibles
    /// with multiplicities. Factors are sorted canonically: by degree, then
    /// lexicographically on the flattened coefficient vectors.
    pub fn factor(&self, g: &FFPoly) -> Result<Vec<(FFPoly, u32)>> {
        if g.is_zero() {
            return Err(Error::InvalidInput("factor of zero polynomial".into()));
        }
        let mut out: Vec<(FFPoly, u32)> = Vec::new();
        let monic = self.poly_monic(g);
        self.factor_squarefree_tree(&monic, 1, &mut out)?;
        out.sort_by(|a, b| {
            let da = a.0.deg();
            let db = b.0.deg();
            da.cmp(&db).then_with(|| self.flatten_poly(&a.0).cmp(&self.flatten_poly(&b.0)))
        });
        Ok(out)
    }

    fn factor_squarefree_tree(&self, g: &FFPoly, mult: u32, out: &mut Vec<(FFPoly, u32)>) -> Result<()> {
        if g.deg() == 0 {
            return Ok(());
        }
        let d = self.poly_derivative(g);
        if d.is_zero() {
            // g = h(y^p): take p-th roots of coefficients
            let h = self.pth_root_poly(g);
            return self.factor_squarefree_tree(&h, mult * self.p as u32, out);
        }
        let gcd = self.poly_gcd(g, &d);
        if gcd.degree() == Some(0) {
            // squarefree
            for irr in self.factor_squarefree(g)? {
                self.push_factor(irr, mult, out);
            }
            return Ok(());
        }
        // g/gcd(g, g') is the product of the distinct primes whose
        // multiplicity is not divisible by p; strip those fully, then the
        // rest is a p-th power handled by the derivative-zero path.
        let (sf, rem) = self.poly_divmod(g, &gcd);
        debug_assert!(rem.is_zero());
        let mut rest = g.clone();
        for irr in self.factor_squarefree(&sf)? {
            let mut k = 0u32;
            loop {
                let (q, r) = self.poly_divmod(&rest, &irr);
                if r.is_zero() {
                    k += 1;
                    rest = q;
                } else {
                    break;
                }
            }
            debug_assert!(k >= 1);
            self.push_factor(irr, mult * k, out);
        }
        if rest.deg() > 0 {
            self.factor_squarefree_tree(&rest, mult, out)?;
        }
        Ok(())
    }

    fn push_factor(&self, irr: FFPoly, mult: u32, out: &mut Vec<(FFPoly, u32)>) {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == irr) {
            e.1 += mult;
        } else {
            out.push((irr, mult));
        }
    }

    fn pth_root_poly(&self, g: &FFPoly) -> FFPoly {
        let p = self.p as usize;
        let level = g.level;
        let q = self.card(level);
        let e = &q / Int::from(self.p); // q/p, exponent for coefficient p-th roots
        let mut coeffs = Vec::new();
        let mut k = 0;
        while k < g.coeffs.len() {
            let c = &g.coeffs[k];
            coeffs.push(self.pow_big(level, c, &e));
            k += p;
        }
        self.poly_new(level, coeffs)
    }

    /// Cantor–Zassenhaus on a squarefree monic polynomial.
    fn factor_squarefree(&self, g: &FFPoly) -> Result<Vec<FFPoly>> {
        let level = g.level;
        let mut out = Vec::new();
        if g.deg() == 0 {
            return Ok(out);
        }
        // distinct degree
        let q = self.card(level);
        let y = self.poly_y(level);
        let mut power = y.clone();
        let mut rest = g.clone();
        let mut d = 0usize;
        while !rest.is_zero() && rest.deg() > 0 {
            d += 1;
            if 2 * d > rest.deg() {
                out.extend(self.equal_degree(&rest, rest.deg())?);
                break;
            }
            power = self.poly_pow_mod(&power, &q, &rest);
            let diff = self.poly_sub(&power, &y);
            let gcd = self.poly_gcd(&diff, &rest);
            if gcd.degree().map_or(false, |dg| dg > 0) {
                out.extend(self.equal_degree(&gcd, d)?);
                let (qq, rr) = self.poly_divmod(&rest, &gcd);
                debug_assert!(rr.is_zero());
                rest = qq;
                power = self.poly_rem(&power, &rest);
            }
        }
        Ok(out)
    }

    /// Equal-degree splitting of a product of distinct irreducibles of
    /// degree d; deterministic seeded randomness.
    fn equal_degree(&self, g: &FFPoly, d: usize) -> Result<Vec<FFPoly>> {
        let level = g.level;
        let mut out = Vec::new();
        if g.deg() == d {
            out.push(self.poly_monic(g));
            return Ok(out);
        }
        let mut rng = SplitMix64(EDF_SEED ^ (g.deg() as u64).wrapping_mul(0x9E37));
        let q = self.card(level);
        let mut stack = vec![self.poly_monic(g)];
        let mut guard = 0usize;
        while let Some(h) = stack.pop() {
            if h.deg() == d {
                out.push(h);
                continue;
            }
            guard += 1;
            if guard > 10_000 {
                return Err(Error::Internal("equal-degree splitting did not converge".into()));
            }
            let r = self.random_poly(level, h.deg(), &mut rng);
            let split = if self.p == 2 {
                // trace map sum r^(2^i) over the degree of F_{q^d}/F_2
                let mut total_bits = d;
                let mut qq = q.clone();
                let mut bits = 0usize;
                while qq > Int::one() {
                    qq >>= 1;
                    bits += 1;
                }
                total_bits *= bits;
                let mut acc = self.poly_rem(&r, &h);
                let mut term = acc.clone();
                for _ in 1..total_bits {
                    term = self.poly_rem(&self.poly_mul(&term, &term), &h);
                    acc = self.poly_add(&acc, &term);
                }
                acc
            } else {
                // r^((q^d - 1)/2) - 1
                let mut e = Int::one();
                for _ in 0..d {
                    e *= &q;
                }
                e -= 1;
                e >>= 1;
                let t = self.poly_pow_mod(&r, &e, &h);
                self.poly_sub(&t, &self.poly_one(level))
            };
            let gcd = self.poly_gcd(&split, &h);
            match gcd.degree() {
                Some(dg) if dg > 0 && dg < h.deg() => {
                    let (quo, rr) = self.poly_divmod(&h, &gcd);
                    debug_assert!(rr.is_zero());
                    stack.push(gcd);
                    stack.push(self.poly_monic(&quo));
                }
                _ => stack.push(h),
            }
        }
        Ok(out)
    }

    fn random_poly(&self, level: usize, below_deg: usize, rng: &mut SplitMix64) -> FFPoly {
        let deg = 1 + (rng.next() as usize) % below_deg.max(2);
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            coeffs.push(self.random_elem(level, rng));
        }
        self.poly_new(level, coeffs)
    }

    fn random_elem(&self, level: usize, rng: &mut SplitMix64) -> FFElem {
        if level == 0 {
            FFElem::Base(rng.next() % self.p)
        } else {
            let f = self.levels[level - 1].f;
            FFElem::Ext((0..f).map(|_| self.random_elem(level - 1, rng)).collect())
        }
    }

    // ---- lifting and reduction -----------------------------------------------

    /// Reduce an integer polynomial mod p to a level-0 polynomial.
    pub fn reduce_int_poly(&self, g: &IntPoly) -> FFPoly {
        let p = self.p_int();
        let coeffs: Vec<FFElem> = g
            .coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(&p);
                FFElem::Base(r.to_u64().expect("residue fits"))
            })
            .collect();
        self.poly_new(0, coeffs)
    }

    /// Deterministic lift of a level-0 polynomial, coefficients in [0, p-1].
    pub fn lift_poly0(&self, g: &FFPoly) -> IntPoly {
        assert_eq!(g.level, 0);
        IntPoly::new(
            g.coeffs
                .iter()
                .map(|c| match c {
                    FFElem::Base(x) => Int::from(*x),
                    _ => unreachable!(),
                })
                .collect(),
        )
    }

    /// Deterministic lift of a level-1 element written on the power basis of
    /// z_0, to an integer polynomial of degree < f_0 with coefficients in
    /// [0, p-1].
    pub fn lift_elem1(&self, c: &FFElem) -> IntPoly {
        match c {
            FFElem::Ext(v) => IntPoly::new(
                v.iter()
                    .map(|x| match x {
                        FFElem::Base(b) => Int::from(*b),
                        _ => unreachable!("not a level-1 element"),
                    })
                    .collect(),
            ),
            FFElem::Base(_) => panic!("lift_elem1 on a base element"),
        }
    }

    /// Evaluate an integer polynomial at z_0 after reduction mod p:
    /// the class of g(x) modulo (p, psi_0).
    pub fn eval_at_gen1(&self, g: &IntPoly) -> FFElem {
        let g0 = self.reduce_int_poly(g);
        let psi0 = &self.levels[0].psi;
        let red = self.poly_rem(&g0, psi0);
        FFElem::Ext(self.poly_to_vec(0, &red))
    }
}

/// Fixed seed for the equal-degree splitting RNG (reproducible runs).
const EDF_SEED: u64 = 0x5EED_BA5E_0FCA_5CAD;

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> TowerField {
        TowerField::new(2)
    }

    #[test]
    fn extend_f2_to_f4() {
        let t = f2();
        let psi = t.poly_new(0, vec![FFElem::Base(1), FFElem::Base(1), FFElem::Base(1)]); // y^2+y+1
        let t4 = t.extend(&psi).unwrap();
        let z = t4.gen(1);
        // z^2 = z + 1
        let z2 = t4.mul(1, &z, &z);
        let z1 = t4.add(1, &z, &t4.one(1));
        assert_eq!(z2, z1);
        assert_eq!(t4.card(1), Int::from(4));
    }

    #[test]
    fn extend_f5_by_quartic() {
        let t = TowerField::new(5);
        // y^4 + 2y^2 + 3
        let psi = t.poly_new(
            0,
            vec![FFElem::Base(3), FFElem::Base(0), FFElem::Base(2), FFElem::Base(0), FFElem::Base(1)],
        );
        let t625 = t.extend(&psi).unwrap();
        assert_eq!(t625.card(1), Int::from(625));
        let z = t625.gen(1);
        let val = t625.poly_eval(&psi, 1, &z);
        assert!(t625.is_zero_elem(&val));
    }

    #[test]
    fn extend_rejects_reducible() {
        let t = TowerField::new(3);
        // y^2 - 1 = (y-1)(y+1)
        let psi = t.poly_new(0, vec![FFElem::Base(2), FFElem::Base(0), FFElem::Base(1)]);
        assert!(t.extend(&psi).is_err());
    }

    #[test]
    fn factor_over_f3() {
        let t = TowerField::new(3);
        let g = t.poly_new(0, vec![FFElem::Base(2), FFElem::Base(0), FFElem::Base(1)]); // y^2-1
        let fs = t.factor(&g).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(q, m)| q.deg() == 1 && *m == 1));
        // y^2+1 irreducible over F_3
        let g2 = t.poly_new(0, vec![FFElem::Base(1), FFElem::Base(0), FFElem::Base(1)]);
        let fs2 = t.factor(&g2).unwrap();
        assert_eq!(fs2.len(), 1);
        assert_eq!(fs2[0].0.deg(), 2);
        assert!(t.is_irreducible(&fs2[0].0));
    }

    #[test]
    fn factor_multiply_back_random() {
        // random degree-8 over F_49
        let t = TowerField::new(7);
        // y^2 + 1: -1 is a non-residue mod 7
        let psi = t.poly_new(0, vec![FFElem::Base(1), FFElem::Base(0), FFElem::Base(1)]);
        let t49 = t.extend(&psi).unwrap();
        let mut rng = SplitMix64(42);
        for _ in 0..4 {
            let mut coeffs: Vec<FFElem> = (0..8).map(|_| t49.random_elem(1, &mut rng)).collect();
            coeffs.push(t49.one(1));
            let g = t49.poly_new(1, coeffs);
            if g.is_zero() {
                continue;
            }
            let fs = t49.factor(&g).unwrap();
            // multiply back
            let mut prod = t49.poly_one(1);
            let mut degsum = 0;
            for (irr, m) in &fs {
                assert!(t49.is_irreducible(irr), "factor must be irreducible");
                degsum += irr.deg() * (*m as usize);
                for _ in 0..*m {
                    prod = t49.poly_mul(&prod, irr);
                }
            }
            assert_eq!(degsum, g.deg());
            assert_eq!(t49.poly_monic(&g), prod);
        }
    }

    #[test]
    fn deterministic_factor_ordering() {
        let t = TowerField::new(5);
        // (y-1)(y-2)(y-3) with a repeated factor
        let mut g = t.poly_one(0);
        for r in [1u64, 2, 2, 3] {
            let lin = t.poly_new(0, vec![FFElem::Base((5 - r) % 5), FFElem::Base(1)]);
            g = t.poly_mul(&g, &lin);
        }
        let f1 = t.factor(&g).unwrap();
        let f2 = t.factor(&g).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(f1.len(), 3);
        assert_eq!(f1.iter().map(|(_, m)| *m).sum::<u32>(), 4);
    }

    #[test]
    fn lift_round_trip() {
        let t = f2();
        let psi = t.poly_new(0, vec![FFElem::Base(1), FFElem::Base(1), FFElem::Base(1)]);
        let t4 = t.extend(&psi).unwrap();
        let z = t4.gen(1);
        // generator lifts to x
        assert_eq!(t4.lift_elem1(&z), IntPoly::x());
        // zero lifts to zero
        assert!(t4.lift_elem1(&t4.zero(1)).is_zero());
        // round trip: reduce(lift(c)) = c
        let mut rng = SplitMix64(9);
        for _ in 0..20 {
            let c = t4.random_elem(1, &mut rng);
            let lifted = t4.lift_elem1(&c);
            assert_eq!(t4.eval_at_gen1(&lifted), c);
        }
    }

    #[test]
    fn tower_two_levels() {
        // F_2 -> F_4 -> F_16 via y^2 + y + z0
        let t = f2();
        let psi0 = t.poly_new(0, vec![FFElem::Base(1), FFElem::Base(1), FFElem::Base(1)]);
        let t4 = t.extend(&psi0).unwrap();
        let z0 = t4.gen(1);
        let psi1 = t4.poly_new(1, vec![z0.clone(), t4.one(1), t4.one(1)]); // y^2 + y + z0
        assert!(t4.is_irreducible(&psi1));
        let t16 = t4.extend(&psi1).unwrap();
        assert_eq!(t16.card(2), Int::from(16));
        let z1 = t16.gen(2);
        let val = t16.poly_eval(&psi1, 2, &z1);
        assert!(t16.is_zero_elem(&val));
        // inverses work at level 2
        let a = t16.add(2, &z1, &t16.one(2));
        let ai = t16.inv(2, &a);
        let prod = t16.mul(2, &a, &ai);
        assert_eq!(prod, t16.one(2));
    }
}

//! The multi-level invariant bundle attached to a p-adic branch of f: levels
//! (phi_i, lambda_i, psi_i) with their secondary invariants, the level
//! valuations v_i, residual polynomial operators, representative
//! construction, divisibility tests, and the gamma-decomposition of
//! valuation-zero monomials.
//!
//! Residual coefficients are normalized against the canonical monomial
//! Phi_i^s pi_i^u at the contact locus; the z-power twists this forces at
//! higher levels come from gamma-decomposing the log vector of the
//! normalizing monomial. Two executable contracts pin the convention: a
//! freshly constructed representative must recompute to its target residual,
//! and the residue map downstream must be multiplicative.

use crate::arith::{phi_expansion, phi_expansion_full, Int, IntPoly};
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FFPoly, TowerField};
use crate::polygon::{self, PlanePoint};

/// Extended-euclid inverse of a modulo m (m >= 1), result in [0, m).
pub(crate) fn modinv(a: i64, m: i64) -> i64 {
    assert!(m >= 1);
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        r0 -= q * r1;
        std::mem::swap(&mut r0, &mut r1);
        t0 -= q * t1;
        std::mem::swap(&mut t0, &mut t1);
    }
    assert!(r0 == 1, "not invertible");
    t0.rem_euclid(m)
}

/// x * inv(h) mod e, the canonical contact abscissa class for value x.
fn canonical_abscissa(x: i64, h: i64, e: i64) -> i64 {
    if e == 1 {
        return 0;
    }
    let hi = modinv(h, e);
    ((x.rem_euclid(e)) as i128 * hi as i128).rem_euclid(e as i128) as i64
}

fn vec_scale_add(dst: &mut [i64], src: &[i64], c: i64) {
    for (d, s) in dst.iter_mut().zip(src.iter()) {
        *d += c * *s;
    }
}

pub(crate) fn pow_int(p: &Int, e: i64) -> Int {
    assert!(e >= 0);
    p.pow(e as u32)
}

/// One level of a type: phi_i, the slope -h_i/e_i, the residual factor psi_i
/// with its root z_i, and the secondary invariants used by generators,
/// residue maps and multipliers.
#[derive(Clone, Debug)]
pub struct Level {
    pub phi: IntPoly,
    pub m: usize,
    pub v_phi: i64,
    pub h: i64,
    pub e: i64,
    pub ell: i64,
    pub ellp: i64,
    pub psi: FFPoly,
    pub f: usize,
    pub z: FFElem,
    /// v_i(a_{s_i}) at the right end point of the chosen side of the polygon
    /// of f
    pub u: i64,
    pub s_end: i64,
    /// [1, q_{s_i-1}, ..., q_{s_i-e+1}] from the phi_i-adic division chain of f
    pub quot: Vec<IntPoly>,
    pub log_phi: Vec<i64>,
    pub log_pi: Vec<i64>,
    pub log_gamma: Vec<i64>,
    /// refinement pairs (phi, (h, e)) recorded when a refinement step
    /// coincided with branching; slopes strictly increase in absolute value
    pub refinements: Vec<(IntPoly, (i64, i64))>,
}

impl Level {
    pub fn slope(&self) -> (i64, i64) {
        (self.h, self.e)
    }
}

/// A type: p, the residual chain realized as a tower of finite fields, and
/// the ordered levels; `levels[k]` is level k+1. The final level of a
/// finished prime is the terminal one (e = f = 1, integer slope); its psi is
/// degree one over the top tower field and does not extend the tower.
#[derive(Clone, Debug)]
pub struct OMType {
    pub p: Int,
    pub pu: u64,
    pub tower: TowerField,
    pub levels: Vec<Level>,
}

/// Data of a (possibly provisional) level i used by the polygon engine:
/// phi_i and v_i(phi_i). Levels below i must already be stored in the type.
#[derive(Clone, Copy)]
pub struct LevelData<'a> {
    pub i: usize,
    pub phi: &'a IntPoly,
    pub v_phi: i64,
}

impl OMType {
    pub fn new(p: Int, pu: u64, tower: TowerField) -> OMType {
        OMType { p, pu, tower, levels: vec![] }
    }

    pub fn psi0(&self) -> &FFPoly {
        self.tower.psi(0)
    }

    pub fn f0(&self) -> usize {
        self.tower.ext_degree(0)
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i - 1]
    }

    pub fn level_data(&self, i: usize) -> LevelData<'_> {
        let lvl = self.level(i);
        LevelData { i, phi: &lvl.phi, v_phi: lvl.v_phi }
    }

    /// z_k as an element of the field at `z_field_level(k)`.
    pub fn z_elem(&self, k: usize) -> FFElem {
        if k == 0 {
            self.tower.gen(1)
        } else {
            self.level(k).z.clone()
        }
    }

    pub fn z_field_level(&self, k: usize) -> usize {
        (k + 1).min(self.tower.height())
    }

    /// e_1 * ... * e_i
    pub fn e_prod_up_to(&self, i: usize) -> i64 {
        self.levels.iter().take(i).map(|l| l.e).product()
    }

    /// Ramification index over p: the product of the e_i below the terminal
    /// level.
    pub fn e_abs(&self) -> i64 {
        self.e_prod_up_to(self.levels.len().saturating_sub(1))
    }

    /// Residue degree over p.
    pub fn f_abs(&self) -> i64 {
        let mut f = self.f0() as i64;
        for l in self.levels.iter().take(self.levels.len().saturating_sub(1)) {
            f *= l.f as i64;
        }
        f
    }

    // ---- level creation ----

    fn log_vectors(&self, i: usize, v_phi: i64, h: i64, e: i64) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
        let (log_phi, log_pi): (Vec<i64>, Vec<i64>) = if i == 1 {
            (vec![0, 1], vec![1, 0])
        } else {
            let prev = self.level(i - 1);
            assert!(v_phi % prev.e == 0, "e_{{i-1}} must divide v_i(phi_i)");
            let c = v_phi / prev.e;
            let mut lp = vec![0i64; i + 1];
            vec_scale_add(&mut lp[..i], &prev.log_pi, -c);
            lp[i] = 1;
            let mut lpi = vec![0i64; i + 1];
            vec_scale_add(&mut lpi[..i], &prev.log_phi, prev.ell);
            vec_scale_add(&mut lpi[..i], &prev.log_pi, -prev.ellp);
            (lp, lpi)
        };
        let mut log_gamma = vec![0i64; i + 1];
        vec_scale_add(&mut log_gamma, &log_phi, e);
        vec_scale_add(&mut log_gamma, &log_pi, -h);
        (log_phi, log_pi, log_gamma)
    }

    /// Append a non-terminal level (branch with e*f > 1); extends the tower
    /// by psi.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn push_enlarged_level(
        &mut self,
        phi: IntPoly,
        v_phi: i64,
        h: i64,
        e: i64,
        psi: FFPoly,
        u: i64,
        s_end: i64,
        quot: Vec<IntPoly>,
        refinements: Vec<(IntPoly, (i64, i64))>,
    ) {
        let i = self.levels.len() + 1;
        let (log_phi, log_pi, log_gamma) = self.log_vectors(i, v_phi, h, e);
        let ell = modinv(h, e);
        let ellp = if e == 1 { -1 } else { (ell * h - 1) / e };
        debug_assert_eq!(ell * h - ellp * e, 1);
        let f = psi.deg();
        self.tower = self.tower.extend_unchecked(&psi);
        let z = self.tower.gen(i + 1);
        let m = phi.deg();
        self.levels.push(Level {
            phi,
            m,
            v_phi,
            h,
            e,
            ell,
            ellp,
            psi,
            f,
            z,
            u,
            s_end,
            quot,
            log_phi,
            log_pi,
            log_gamma,
            refinements,
        });
    }

    /// Append the terminal level (e = f = 1, integer slope -h). psi is monic
    /// of degree one over the current top field; z is its root and the tower
    /// stays as is.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn push_terminal_level(
        &mut self,
        phi: IntPoly,
        v_phi: i64,
        h: i64,
        psi: FFPoly,
        u: i64,
        s_end: i64,
        quot: Vec<IntPoly>,
    ) {
        let i = self.levels.len() + 1;
        assert_eq!(psi.deg(), 1);
        let (log_phi, log_pi, log_gamma) = self.log_vectors(i, v_phi, h, 1);
        let top = self.tower.height();
        let lc_inv = self.tower.inv(top, psi.coeffs.last().unwrap());
        let z = self.tower.neg(top, &self.tower.mul(top, &psi.coeffs[0], &lc_inv));
        let m = phi.deg();
        self.levels.push(Level {
            phi,
            m,
            v_phi,
            h,
            e: 1,
            ell: 0,
            ellp: -1,
            psi,
            f: 1,
            z,
            u,
            s_end,
            quot,
            log_phi,
            log_pi,
            log_gamma,
            refinements: vec![],
        });
    }

    pub(crate) fn pop_terminal_level(&mut self) -> Level {
        self.levels.pop().expect("no terminal level")
    }

    // ---- valuations and polygons ----

    /// v_i(g) for nonzero g; valid for 1 <= i <= levels.len() + 1.
    pub fn v_level(&self, i: usize, g: &IntPoly) -> i64 {
        assert!(!g.is_zero(), "v_i of zero");
        if i == 1 {
            return g.min_val_p(&self.p);
        }
        let ld = self.level_data(i - 1);
        let lvl = self.level(i - 1);
        let (_, pts) = self.cloud(&ld, g, None);
        let t = polygon::first_touch(&pts, lvl.h, lvl.e).expect("nonempty cloud");
        t.h_num
    }

    /// phi_i-adic cloud of g at level i: the coefficients and the points
    /// (s, v_i(a_s) + s*v_i(phi_i)) over the nonzero coefficients.
    pub(crate) fn cloud(
        &self,
        ld: &LevelData,
        g: &IntPoly,
        count: Option<usize>,
    ) -> (Vec<IntPoly>, Vec<PlanePoint>) {
        let coeffs = match count {
            Some(c) => phi_expansion(g, ld.phi, c).expect("monic phi").0,
            None => phi_expansion_full(g, ld.phi),
        };
        let mut pts = Vec::new();
        for (s, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let v = self.v_level(ld.i, a) + (s as i64) * ld.v_phi;
            pts.push(PlanePoint { s: s as i64, u: v });
        }
        (coeffs, pts)
    }

    /// Principal Newton polygon of order i of g, optionally from a truncated
    /// expansion (diagnostics and tests).
    pub fn newton_polygon(
        &self,
        i: usize,
        g: &IntPoly,
        count: Option<usize>,
    ) -> Result<polygon::NewtonPolygon> {
        let ld = self.level_data(i);
        let (_, pts) = self.cloud(&ld, g, count);
        let np = polygon::lower_envelope(&pts)?;
        let mut vertices = vec![];
        if !np.vertices.is_empty() {
            vertices.push(np.vertices[0]);
            for (k, s) in np.sides().iter().enumerate() {
                if s.h > 0 && s.e >= 1 {
                    if s.slope().0 < 0 {
                        vertices.push(np.vertices[k + 1]);
                    } else {
                        break;
                    }
                } else {
                    break;
                }
            }
        }
        Ok(polygon::NewtonPolygon { vertices })
    }

    /// res_i(g) in F_i: the fully reduced residue of nonzero g against its
    /// canonical normalizing monomial; res_1(g) = R_0(g)(z_0).
    pub(crate) fn res_elem(&self, i: usize, g: &IntPoly) -> FFElem {
        if i == 1 {
            let v = g.min_val_p(&self.p);
            let reduced = g.div_scalar_exact(&pow_int(&self.p, v));
            return self.tower.eval_at_gen1(&reduced);
        }
        let ld = self.level_data(i - 1);
        let lvl = self.level(i - 1);
        let rp = self.residual_with(&ld, g, lvl.h, lvl.e, None);
        let zl = self.z_field_level(i - 1);
        let z = self.z_elem(i - 1);
        self.tower.poly_eval(&rp, zl, &z)
    }

    /// Residual polynomial of g at level i with respect to the slope -h/e,
    /// over F_i. `count` optionally bounds the phi-adic expansion.
    pub(crate) fn residual_with(
        &self,
        ld: &LevelData,
        g: &IntPoly,
        h: i64,
        e: i64,
        count: Option<usize>,
    ) -> FFPoly {
        let (coeffs, pts) = self.cloud(ld, g, count);
        self.residual_from_cloud(ld, &coeffs, &pts, h, e)
    }

    pub(crate) fn residual_from_cloud(
        &self,
        ld: &LevelData,
        coeffs: &[IntPoly],
        pts: &[PlanePoint],
        h: i64,
        e: i64,
    ) -> FFPoly {
        let i = ld.i;
        let fi = i.min(self.tower.height());
        let touch = polygon::first_touch(pts, h, e).expect("nonempty cloud");
        let v_next = touch.h_num; // e * H, the level-(i+1) value
        let s_can = canonical_abscissa(v_next, h, e);
        let last = touch.contact.last().unwrap().s;
        let u_can = (v_next - s_can * h) / e;
        let d_max = ((last - s_can) / e).max(0);
        let mut out: Vec<FFElem> = Vec::with_capacity(d_max as usize + 1);
        for j in 0..=d_max {
            let s_j = s_can + j * e;
            let on_line = pts.iter().any(|p| {
                p.s == s_j && p.u as i128 * e as i128 + p.s as i128 * h as i128 == v_next as i128
            });
            if !on_line {
                out.push(self.tower.zero(fi));
                continue;
            }
            let a = &coeffs[s_j as usize];
            let v_c = self.v_level(i, a);
            let rho = self.res_elem(i, a);
            if self.tower.is_zero_elem(&rho) {
                out.push(self.tower.zero(fi));
                continue;
            }
            let tw = self.twist(i, ld.v_phi, h, v_c, s_j, j, u_can);
            out.push(self.tower.mul(fi, &rho, &tw));
        }
        self.tower.poly_new(fi, out)
    }

    /// The z-power twist attached to the residual coefficient at contact
    /// index j (abscissa s_j) of a level-i residual, for a coefficient of
    /// value v_c, where u_can is the canonical ordinate of the touching line.
    fn twist(&self, i: usize, v_phi_i: i64, h_i: i64, v_c: i64, s_j: i64, j: i64, u_can: i64) -> FFElem {
        let fi = i.min(self.tower.height());
        if i == 1 {
            return self.tower.one(fi);
        }
        let prev = self.level(i - 1);
        let (hp, ep) = (prev.h, prev.e);
        let sigma = canonical_abscissa(v_c, hp, ep);
        let omega = (v_c - sigma * hp) / ep;
        assert!(v_phi_i % ep == 0, "e_{{i-1}} must divide v_i(phi_i)");
        let vq = v_phi_i / ep;
        // log of the normalizing monomial, coordinates (p, phi_1..phi_{i-1}):
        //   Phi_{i-1}^sigma * pi_{i-1}^(omega + s_j vq) * pi_i^(j h_i - u_can)
        let mut lg = vec![0i64; i];
        vec_scale_add(&mut lg, &prev.log_phi, sigma);
        vec_scale_add(&mut lg, &prev.log_pi, omega + s_j * vq);
        let c = j * h_i - u_can;
        vec_scale_add(&mut lg, &prev.log_phi, c * prev.ell);
        vec_scale_add(&mut lg, &prev.log_pi, -c * prev.ellp);
        let ts = self
            .gamma_decompose(i - 1, &lg)
            .expect("normalizing monomial must have valuation zero");
        self.z_power_product(&ts, fi)
    }

    /// prod z_k^{t_k} for k = 1..len(ts), embedded at field level `at`.
    pub(crate) fn z_power_product(&self, ts: &[i64], at: usize) -> FFElem {
        let mut acc = self.tower.one(at);
        for (k, t) in ts.iter().enumerate() {
            if *t == 0 {
                continue;
            }
            let zk = self.z_elem(k + 1);
            let zl = self.z_field_level(k + 1);
            let zke = self.tower.embed(&zk, zl, at);
            acc = self.tower.mul(at, &acc, &self.tower.pow_i64(at, &zke, *t));
        }
        acc
    }

    /// Decompose a valuation-zero monomial p^{n_0} phi_1^{n_1}...phi_s^{n_s}
    /// as gamma_1^{t_1}...gamma_s^{t_s}: t_i = vector[i]/e_i, subtracting
    /// t_i * log gamma_i at each step. Errors when a coordinate fails the
    /// divisibility forced by the zero-valuation hypothesis.
    pub fn gamma_decompose(&self, s: usize, vec: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(vec.len(), s + 1);
        let mut v = vec.to_vec();
        let mut ts = vec![0i64; s];
        for k in (1..=s).rev() {
            let lvl = self.level(k);
            if v[k] % lvl.e != 0 {
                return Err(Error::InconsistentLogVector);
            }
            let t = v[k] / lvl.e;
            ts[k - 1] = t;
            vec_scale_add(&mut v[..k + 1], &lvl.log_gamma, -t);
        }
        if v[0] != 0 {
            return Err(Error::InconsistentLogVector);
        }
        Ok(ts)
    }

    // ---- lifting ----

    /// Integer polynomial of degree < m_i with v_i = w >= 0 whose level-i
    /// residue is exactly the nonzero c.
    pub(crate) fn lift_term(&self, i: usize, c: &FFElem, w: i64) -> IntPoly {
        debug_assert!(!self.tower.is_zero_elem(c));
        if i == 1 {
            return self.tower.lift_elem1(c).mul_scalar(&pow_int(&self.p, w));
        }
        let prev = self.level(i - 1);
        let (hp, ep) = (prev.h, prev.e);
        let s0 = canonical_abscissa(w, hp, ep);
        let u0 = (w - s0 * hp) / ep;
        assert!(u0 >= 0, "lift target outside the integral cone");
        let coords = self.tower.coords(c).to_vec();
        let fi1 = (i - 1).min(self.tower.height());
        let mut acc = IntPoly::zero();
        for (k, ck) in coords.iter().enumerate() {
            if self.tower.is_zero_elem(ck) {
                continue;
            }
            let s_k = s0 + (k as i64) * ep;
            let w_k = u0 - (k as i64) * hp - s_k * prev.v_phi;
            assert!(w_k >= 0, "lift target outside the integral cone");
            let tw = self.twist(i - 1, prev.v_phi, hp, w_k, s_k, k as i64, u0);
            let target = self.tower.mul(fi1, ck, &self.tower.inv(fi1, &tw));
            let a = self.lift_term(i - 1, &target, w_k);
            acc = acc.add(&a.mul(&prev.phi.pow(s_k as usize)));
        }
        acc
    }

    /// Monic representative of the type of order i whose level-i data is
    /// (phi_i via ld, slope -h/e, psi over F_i): degree e*deg(psi)*m_i, with
    /// residual at level i exactly psi. The construction is verified by
    /// recomputation; a mismatch is a twist-convention bug and aborts.
    pub(crate) fn representative_for(
        &self,
        ld: &LevelData,
        h: i64,
        e: i64,
        psi: &FFPoly,
    ) -> Result<IntPoly> {
        let i = ld.i;
        let fpsi = psi.deg() as i64;
        let fi = i.min(self.tower.height());
        // one-sided target polygon through (e*f, e*f*v_phi) with slope -h/e
        let h0 = e * fpsi * ld.v_phi + fpsi * h;
        let mut rep = ld.phi.pow((e * fpsi) as usize);
        // the monic leading term carries its own twist, so the residual can
        // only be made proportional to psi; scale the lower coefficients to
        // match it
        let tw_lead = self.twist(i, ld.v_phi, h, 0, e * fpsi, fpsi, h0);
        for k in 0..fpsi {
            let ck = self.tower.poly_coeff(psi, k as usize);
            if self.tower.is_zero_elem(&ck) {
                continue;
            }
            let o_k = h0 - k * h;
            let s_k = e * k;
            let w_k = o_k - s_k * ld.v_phi;
            let tw = self.twist(i, ld.v_phi, h, w_k, s_k, k, h0);
            let target = self.tower.mul(
                fi,
                &self.tower.mul(fi, &ck, &tw_lead),
                &self.tower.inv(fi, &tw),
            );
            let a = self.lift_term(i, &target, w_k);
            rep = rep.add(&a.mul(&ld.phi.pow(s_k as usize)));
        }
        // verification: the residual must recompute to tw_lead * psi
        let check = self.residual_with(ld, &rep, h, e, None);
        let expect = self.tower.poly_scale(psi, &tw_lead);
        if check != expect {
            return Err(Error::Internal(format!(
                "representative verification failed at level {}",
                i
            )));
        }
        Ok(rep)
    }

    /// Integer polynomial of degree < m_{i+1} with v_{i+1}(P) = v_target (a
    /// multiple of e_i, at least v_{i+1}(phi_{i+1})) whose level-i residual
    /// is exactly the given nonzero polynomial over F_i: each coefficient is
    /// lifted onto the lattice point of the one-sided slope polygon at
    /// abscissa e_i*k. Verified by recomputation.
    pub(crate) fn build_on_side(&self, i: usize, v_target: i64, want: &FFPoly) -> Result<IntPoly> {
        let lvl = self.level(i);
        let ld = self.level_data(i);
        let (h, e) = (lvl.h, lvl.e);
        assert!(v_target % e == 0);
        let u_can = v_target / e;
        let fi = i.min(self.tower.height());
        let mut out = IntPoly::zero();
        for (k, ck) in want.coeffs.iter().enumerate() {
            if self.tower.is_zero_elem(ck) {
                continue;
            }
            let k = k as i64;
            let s_k = e * k;
            let w_k = u_can - k * h - s_k * ld.v_phi;
            if w_k < 0 {
                return Err(Error::Internal("prescribed value below the integral cone".into()));
            }
            let tw = self.twist(i, ld.v_phi, h, w_k, s_k, k, u_can);
            let target = self.tower.mul(fi, ck, &self.tower.inv(fi, &tw));
            let a = self.lift_term(i, &target, w_k);
            out = out.add(&a.mul(&ld.phi.pow(s_k as usize)));
        }
        let check = self.residual_with(&ld, &out, h, e, None);
        if &check != want {
            return Err(Error::Internal("prescribed-residual construction failed".into()));
        }
        Ok(out)
    }

    /// Residual polynomial of g at stored level i with respect to that
    /// level's own slope, over F_i.
    pub fn residual_poly(&self, i: usize, g: &IntPoly) -> FFPoly {
        let ld = self.level_data(i);
        let lvl = self.level(i);
        self.residual_with(&ld, g, lvl.h, lvl.e, None)
    }

    /// Representative of the full stored type: a monic polynomial of degree
    /// e_r f_r m_r whose level-r residual is proportional to psi_r.
    pub fn representative(&self) -> Result<IntPoly> {
        let r = self.levels.len();
        assert!(r >= 1);
        let ld = self.level_data(r);
        let lvl = self.level(r);
        self.representative_for(&ld, lvl.h, lvl.e, &lvl.psi)
    }

    // ---- divisibility ----

    /// psi_i | R_i(g) for the stored level i (the truncation of the type at
    /// level i divides g).
    pub fn trunc_divides(&self, i: usize, g: &IntPoly) -> bool {
        let ld = self.level_data(i);
        let lvl = self.level(i);
        let rp = self.residual_with(&ld, g, lvl.h, lvl.e, None);
        if rp.is_zero() {
            return true;
        }
        self.tower.poly_rem(&rp, &lvl.psi).is_zero()
    }

    /// The full type divides g.
    pub fn divides(&self, g: &IntPoly) -> bool {
        if self.levels.is_empty() {
            return self.tower.poly_rem(&self.res0_poly(g), self.psi0()).is_zero();
        }
        self.trunc_divides(self.levels.len(), g)
    }

    /// R_0(g) over F_0.
    pub fn res0_poly(&self, g: &IntPoly) -> FFPoly {
        let v = g.min_val_p(&self.p);
        self.tower.reduce_int_poly(&g.div_scalar_exact(&pow_int(&self.p, v)))
    }

    /// Canonical byte key: (f_abs, e_abs, per-level invariants). Used for
    /// deterministic prime labels.
    pub fn sort_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let push_i64 = |out: &mut Vec<u8>, v: i64| out.extend_from_slice(&v.to_be_bytes());
        push_i64(&mut out, self.f_abs());
        push_i64(&mut out, self.e_abs());
        let mut psi0flat = self.tower.flatten_poly(self.psi0());
        out.extend(psi0flat.drain(..).flat_map(|x| x.to_be_bytes()));
        for lvl in &self.levels {
            push_i64(&mut out, lvl.m as i64);
            push_i64(&mut out, lvl.h);
            push_i64(&mut out, lvl.e);
            push_i64(&mut out, lvl.f as i64);
            for c in lvl.phi.coeffs() {
                let (sign, bytes) = c.to_bytes_be();
                out.push(match sign {
                    num_bigint::Sign::Minus => 0,
                    num_bigint::Sign::NoSign => 1,
                    num_bigint::Sign::Plus => 2,
                });
                push_i64(&mut out, bytes.len() as i64);
                out.extend_from_slice(&bytes);
            }
            out.extend(self.tower.flatten_poly(&lvl.psi).into_iter().flat_map(|x| x.to_be_bytes()));
        }
        out
    }
}

/// Index of coincidence of two types over the same p: 0 when psi_0 differs,
/// else the least level j where (phi_j, lambda_j, psi_j) differ.
pub fn index_of_coincidence(a: &OMType, b: &OMType) -> usize {
    assert_eq!(a.p, b.p, "index of coincidence needs a common p");
    if a.tower.flatten_poly(a.psi0()) != b.tower.flatten_poly(b.psi0()) {
        return 0;
    }
    let n = a.levels.len().min(b.levels.len());
    for j in 1..=n {
        let la = a.level(j);
        let lb = b.level(j);
        if la.phi != lb.phi
            || la.h != lb.h
            || la.e != lb.e
            || a.tower.flatten_poly(&la.psi) != b.tower.flatten_poly(&lb.psi)
        {
            return j;
        }
    }
    n
}

/// The extended refinement list Ref at level j: Refinements_j followed by
/// the pair (phi_j, lambda_j) in the last position.
pub fn extended_refinements(t: &OMType, j: usize) -> Vec<(IntPoly, (i64, i64))> {
    let lvl = t.level(j);
    let mut out = lvl.refinements.clone();
    out.push((lvl.phi.clone(), (lvl.h, lvl.e)));
    out
}

/// Greatest common phi-polynomial of two types diverging at level
/// j = index_of_coincidence >= 1, with the hidden slopes (the slopes at the
/// last common position of the extended refinement lists).
pub fn gc_phi(a: &OMType, b: &OMType) -> (IntPoly, (i64, i64), (i64, i64)) {
    let j = index_of_coincidence(a, b);
    assert!(j >= 1, "gc_phi needs index of coincidence >= 1");
    let ra = extended_refinements(a, j);
    let rb = extended_refinements(b, j);
    let mut k = 0usize;
    while k < ra.len() && k < rb.len() && ra[k].0 == rb[k].0 {
        k += 1;
    }
    assert!(k >= 1, "refinement lists must share their first entry");
    let k = k - 1;
    (ra[k].0.clone(), ra[k].1, rb[k].1)
}

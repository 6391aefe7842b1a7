//! Newton-polygon geometry: lower convex envelopes of integer point clouds,
//! principal parts, and the first-touch line of a prescribed negative slope.

use crate::error::{Error, Result};

/// A cloud point (abscissa, ordinate). Points with vanishing coefficients are
/// omitted from clouds before they reach this module.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PlanePoint {
    pub s: i64,
    pub u: i64,
}

/// A side of negative slope -h/e (gcd(h,e)=1, h,e >= 1), with its endpoints
/// and degree d = (s1-s0)/e.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Side {
    pub h: i64,
    pub e: i64,
    pub s0: i64,
    pub u0: i64,
    pub s1: i64,
    pub u1: i64,
}

impl Side {
    pub fn degree(&self) -> i64 {
        (self.s1 - self.s0) / self.e
    }

    /// Slope as an exact pair (numerator, denominator) = (-h, e).
    pub fn slope(&self) -> (i64, i64) {
        (-self.h, self.e)
    }
}

/// Lower convex envelope, kept as its vertex chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NewtonPolygon {
    pub vertices: Vec<PlanePoint>,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Lower convex envelope of a nonempty cloud. Points sharing an abscissa are
/// collapsed to the minimum ordinate first.
pub fn lower_envelope(cloud: &[PlanePoint]) -> Result<NewtonPolygon> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let mut pts: Vec<PlanePoint> = cloud.to_vec();
    pts.sort_by_key(|p| (p.s, p.u));
    pts.dedup_by(|b, a| {
        if a.s == b.s {
            // keep the minimum ordinate (list is sorted, a comes first)
            true
        } else {
            false
        }
    });
    // Monotone chain (lower hull), keeping collinear points out of the vertex
    // list.
    let mut hull: Vec<PlanePoint> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // cross product of (b-a) x (p-a); keep strictly convex turns
            let cross = (b.s - a.s) as i128 * (p.u - a.u) as i128
                - (b.u - a.u) as i128 * (p.s - a.s) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(NewtonPolygon { vertices: hull })
}

impl NewtonPolygon {
    /// All sides, in vertex order (slopes strictly increase left to right).
    pub fn sides(&self) -> Vec<Side> {
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ds = b.s - a.s;
            let du = a.u - b.u; // positive for negative slopes
            let g = gcd(ds, du);
            let (h, e) = if du == 0 {
                (0, 1)
            } else if du > 0 {
                (du / g, ds / g)
            } else {
                // positive slope: normalized with h negative
                (du / g, ds / g)
            };
            out.push(Side { h, e, s0: a.s, u0: a.u, s1: b.s, u1: b.u });
        }
        out
    }

    /// Sides of strictly negative slope, in envelope order (slopes increase
    /// left to right, so the steepest side comes first).
    pub fn principal_part(&self) -> Vec<Side> {
        self.sides().into_iter().filter(|s| s.h > 0).collect()
    }
}

/// Result of shifting a line of slope `lambda` upward until it first touches
/// the cloud: the contact set, the left end point of the contact, and the
/// intercept H = u + s*|lambda| at the origin.
#[derive(Clone, Debug)]
pub struct FirstTouch {
    /// contact points, sorted by abscissa
    pub contact: Vec<PlanePoint>,
    pub s: i64,
    pub u: i64,
    /// intercept as an exact pair (numerator, denominator): H = num/den
    pub h_num: i64,
    pub h_den: i64,
}

/// First touch of the line of slope -h/e (h >= 1) on the cloud.
pub fn first_touch(cloud: &[PlanePoint], h: i64, e: i64) -> Result<FirstTouch> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    assert!(h >= 1 && e >= 1);
    // minimize e*u + s*h (the intercept scaled by e)
    let mut best: Option<i128> = None;
    for p in cloud {
        let val = p.u as i128 * e as i128 + p.s as i128 * h as i128;
        if best.map_or(true, |b| val < b) {
            best = Some(val);
        }
    }
    let best = best.unwrap();
    let mut contact: Vec<PlanePoint> = cloud
        .iter()
        .copied()
        .filter(|p| p.u as i128 * e as i128 + p.s as i128 * h as i128 == best)
        .collect();
    contact.sort_by_key(|p| p.s);
    contact.dedup();
    let left = contact[0];
    Ok(FirstTouch {
        s: left.s,
        u: left.u,
        contact,
        h_num: i64::try_from(best).expect("intercept overflow"),
        h_den: e,
    })
}

/// Plain-text sketch of a polygon for the --dump-polygons diagnostic flag.
pub fn ascii_render(npoly: &NewtonPolygon) -> String {
    let vs = &npoly.vertices;
    let mut out = String::new();
    out.push_str("vertices:");
    for v in vs {
        out.push_str(&format!(" ({},{})", v.s, v.u));
    }
    out.push('\n');
    for side in npoly.sides() {
        out.push_str(&format!(
            "  side ({},{}) -> ({},{}) slope {}/{}\n",
            side.s0, side.u0, side.s1, side.u1, -side.h, side.e
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<PlanePoint> {
        v.iter().map(|&(s, u)| PlanePoint { s, u }).collect()
    }

    #[test]
    fn envelope_basic() {
        let np = lower_envelope(&pts(&[(0, 3), (1, 1), (2, 0)])).unwrap();
        assert_eq!(np.vertices, pts(&[(0, 3), (1, 1), (2, 0)]));
        let sides = np.sides();
        assert_eq!(sides[0].slope(), (-2, 1));
        assert_eq!(sides[1].slope(), (-1, 1));
    }

    #[test]
    fn envelope_drops_interior_point() {
        let np = lower_envelope(&pts(&[(0, 2), (1, 2), (2, 0)])).unwrap();
        assert_eq!(np.vertices, pts(&[(0, 2), (2, 0)]));
    }

    #[test]
    fn envelope_single_point() {
        let np = lower_envelope(&pts(&[(3, 1)])).unwrap();
        assert_eq!(np.vertices.len(), 1);
        assert!(np.sides().is_empty());
        assert!(np.principal_part().is_empty());
    }

    #[test]
    fn envelope_empty_errors() {
        assert!(lower_envelope(&[]).is_err());
    }

    #[test]
    fn principal_part_filters() {
        let np = lower_envelope(&pts(&[(0, 2), (1, 1), (2, 1), (4, 2)])).unwrap();
        let pp = np.principal_part();
        assert_eq!(pp.len(), 1);
        assert_eq!(pp[0].slope(), (-1, 1));
        // no negative slopes at all
        let np2 = lower_envelope(&pts(&[(0, 0), (2, 1)])).unwrap();
        assert!(np2.principal_part().is_empty());
    }

    #[test]
    fn first_touch_side_and_point() {
        let cloud = pts(&[(0, 1), (1, 0)]);
        let t = first_touch(&cloud, 1, 1).unwrap();
        assert_eq!((t.s, t.u), (0, 1));
        assert_eq!((t.h_num, t.h_den), (1, 1));
        assert_eq!(t.contact.len(), 2);

        // a steeper line binds at the left end; a shallower one at the right
        let t2 = first_touch(&cloud, 2, 1).unwrap();
        assert_eq!((t2.s, t2.u), (0, 1));
        assert_eq!((t2.h_num, t2.h_den), (1, 1));
        assert_eq!(t2.contact.len(), 1);

        let t3 = first_touch(&cloud, 1, 2).unwrap();
        assert_eq!((t3.s, t3.u), (1, 0));
        assert_eq!((t3.h_num, t3.h_den), (1, 2));
        assert_eq!(t3.contact.len(), 1);
    }

    #[test]
    fn first_touch_matches_bruteforce_min() {
        let mut state = 7u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 40) as i64
        };
        for _ in 0..50 {
            let cloud: Vec<PlanePoint> = (0..12)
                .map(|i| PlanePoint { s: i, u: next() % 100 })
                .collect();
            let (h, e) = (1 + next().rem_euclid(5), 1 + next().rem_euclid(4));
            let g = super::gcd(h, e);
            let (h, e) = (h / g, e / g);
            let t = first_touch(&cloud, h, e).unwrap();
            let brute = cloud.iter().map(|p| p.u * e + p.s * h).min().unwrap();
            assert_eq!(t.h_num, brute);
        }
    }

    #[test]
    fn envelope_idempotent() {
        let np = lower_envelope(&pts(&[(0, 9), (1, 5), (3, 2), (7, 0), (9, 0)])).unwrap();
        let again = lower_envelope(&np.vertices).unwrap();
        assert_eq!(np, again);
    }
}

//! Exact wall/path intersection.

use super::{Building, Point2, Point3};
use crate::scalar::Scalar;

fn cross<T: Scalar>(a: Point2<T>, b: Point2<T>) -> T {
    a.x * b.y - a.y * b.x
}

fn dot<T: Scalar>(a: Point2<T>, b: Point2<T>) -> T {
    a.x * b.x + a.y * b.y
}

fn sub<T: Scalar>(a: Point2<T>, b: Point2<T>) -> Point2<T> {
    Point2::new(a.x - b.x, a.y - b.y)
}

/// Whether `building` blocks the straight path from `tx` to `rx`.
///
/// The footprints must intersect (touching counts) at a point where the
/// path height is at or below the building top. Collinear overlaps use the
/// lowest path height over the shared stretch.
pub fn path_blocked_by<T: Scalar>(tx: Point3<T>, rx: Point3<T>, building: &Building<T>) -> bool {
    let p = tx.xy();
    let r = sub(rx.xy(), p);
    let (a, b) = building.endpoints();
    let s = sub(b, a);
    let qp = sub(a, p);
    let zero = T::zero();
    let one = T::one();
    let height_at = |t: T| tx.z + t * (rx.z - tx.z);

    let rr = dot(r, r);
    if rr == zero {
        // Vertical path: blocked if the wall passes through its foot.
        let ss = dot(s, s);
        let u = (-dot(qp, s) / ss).max(zero).min(one);
        let closest = Point2::new(a.x + u * s.x, a.y + u * s.y);
        return closest == p && tx.z.min(rx.z) <= building.height_m;
    }

    let denom = cross(r, s);
    if denom == zero {
        if cross(qp, r) != zero {
            return false;
        }
        let t0 = dot(qp, r) / rr;
        let t1 = dot(sub(b, p), r) / rr;
        let lo = t0.min(t1).max(zero);
        let hi = t0.max(t1).min(one);
        if lo > hi {
            return false;
        }
        return height_at(lo).min(height_at(hi)) <= building.height_m;
    }

    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    if t < zero || t > one || u < zero || u > one {
        return false;
    }
    height_at(t) <= building.height_m
}

/// Number of buildings blocking the path from `tx` to `rx`, each counted once.
pub fn count_blockages<T: Scalar>(
    tx: Point3<T>,
    rx: Point3<T>,
    buildings: &[Building<T>],
) -> usize {
    buildings
        .iter()
        .filter(|b| path_blocked_by(tx, rx, b))
        .count()
}

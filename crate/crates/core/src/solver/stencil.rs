//! Discrete Hessian determinants: the 9-point form used by Newton and the
//! wide-stencil monotone form used as a fallback.

/// Lattice directions, ordered by reach. The first 4 have reach 1, the first
/// 8 reach 2, all 16 reach 3.
const DIRECTIONS: [(isize, isize); 16] = [
    (1, 0),
    (0, 1),
    (1, 1),
    (1, -1),
    (2, 1),
    (-1, 2),
    (1, 2),
    (-2, 1),
    (3, 1),
    (-1, 3),
    (1, 3),
    (-3, 1),
    (3, 2),
    (-2, 3),
    (2, 3),
    (-3, 2),
];

/// Number of directions available with the given reach (4, 8 or 16).
pub fn direction_count(reach: usize) -> usize {
    match reach {
        0 | 1 => 4,
        2 => 8,
        _ => 16,
    }
}

/// Reach needed by a stencil with `count` directions.
pub fn reach_for(count: usize) -> Option<usize> {
    match count {
        4 => Some(1),
        8 => Some(2),
        16 => Some(3),
        _ => None,
    }
}

pub fn directions_within(reach: usize) -> Vec<(isize, isize)> {
    DIRECTIONS[..direction_count(reach)].to_vec()
}

/// Orthogonal pairs among the first `count` directions (consecutive entries).
pub fn orthogonal_pairs(count: usize) -> Vec<((isize, isize), (isize, isize))> {
    DIRECTIONS[..count].chunks(2).map(|c| (c[0], c[1])).collect()
}

/// Offsets and weights of one linearised stencil row.
pub type Row = Vec<((isize, isize), f64)>;

/// 9-point determinant `uxx·uyy − uxy²` at a node, with its derivative with
/// respect to each stencil value. `v(di, dj)` is the value at the offset.
pub fn det9(v: impl Fn(isize, isize) -> f64, h: f64) -> (f64, Row) {
    let h2 = h * h;
    let c = v(0, 0);
    let uxx = (v(1, 0) + v(-1, 0) - 2.0 * c) / h2;
    let uyy = (v(0, 1) + v(0, -1) - 2.0 * c) / h2;
    let uxy = (v(1, 1) + v(-1, -1) - v(-1, 1) - v(1, -1)) / (4.0 * h2);
    let det = uxx * uyy - uxy * uxy;
    let row = vec![
        ((0, 0), -2.0 * (uxx + uyy) / h2),
        ((1, 0), uyy / h2),
        ((-1, 0), uyy / h2),
        ((0, 1), uxx / h2),
        ((0, -1), uxx / h2),
        ((1, 1), -uxy / (2.0 * h2)),
        ((-1, -1), -uxy / (2.0 * h2)),
        ((-1, 1), uxy / (2.0 * h2)),
        ((1, -1), uxy / (2.0 * h2)),
    ];
    (det, row)
}

/// Monotone wide-stencil determinant: the minimum over orthogonal direction
/// pairs `(d, e)` of `a⁺b⁺ + min(a,0) + min(b,0)`, where `a, b` are the second
/// differences along `d, e`. Equals the determinant for a convex quadratic
/// aligned with some pair; non-decreasing in every neighbour value. Ties go to
/// the lowest pair index. `v` returns `None` where no data exists.
pub fn det_wide(v: impl Fn(isize, isize) -> Option<f64>, h: f64, count: usize) -> (f64, Row) {
    let c = v(0, 0).expect("centre value");
    let mut best: Option<(f64, Row)> = None;
    for (d, e) in orthogonal_pairs(count) {
        let second = |(di, dj): (isize, isize)| -> Option<(f64, f64)> {
            let len2 = (di * di + dj * dj) as f64 * h * h;
            Some(((v(di, dj)? + v(-di, -dj)? - 2.0 * c) / len2, len2))
        };
        let (Some((a, la)), Some((b, lb))) = (second(d), second(e)) else {
            continue;
        };
        let value = a.max(0.0) * b.max(0.0) + a.min(0.0) + b.min(0.0);
        if best.as_ref().is_some_and(|(bv, _)| value >= *bv) {
            continue;
        }
        let da = if a > 0.0 { b.max(0.0) } else { 1.0 };
        let db = if b > 0.0 { a.max(0.0) } else { 1.0 };
        let row = vec![
            ((0, 0), -2.0 * (da / la + db / lb)),
            (d, da / la),
            ((-d.0, -d.1), da / la),
            (e, db / lb),
            ((-e.0, -e.1), db / lb),
        ];
        best = Some((value, row));
    }
    best.expect("the axis pair is always available")
}

//! Piecewise-linear face states with central slopes.

/// Face states along a line of `n` cells. Face `i` separates cells `i − 1` and `i`.
///
/// End cells of a non-periodic line use the one-sided slope towards their only
/// neighbour. The outer sides of faces `0` and `n` repeat the adjacent cell's
/// face value; the caller replaces them with wall ghost states.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceStates {
    pub left: Vec<Vec<f64>>,
    pub right: Vec<Vec<f64>>,
}

pub fn reconstruct(cells: &[Vec<f64>], periodic: bool) -> FaceStates {
    let n = cells.len();
    let around = |j: usize| -> (Option<&[f64]>, Option<&[f64]>) {
        let lo = if j > 0 {
            Some(cells[j - 1].as_slice())
        } else if periodic {
            Some(cells[n - 1].as_slice())
        } else {
            None
        };
        let hi = if j + 1 < n {
            Some(cells[j + 1].as_slice())
        } else if periodic {
            Some(cells[0].as_slice())
        } else {
            None
        };
        (lo, hi)
    };
    let value = |j: usize, plus: bool| {
        let (lo, hi) = around(j);
        let mut out = vec![0.0; cells[j].len()];
        face_value(&cells[j], lo, hi, plus, &mut out);
        out
    };
    let mut left = Vec::with_capacity(n + 1);
    let mut right = Vec::with_capacity(n + 1);
    for i in 0..=n {
        left.push(match i {
            0 if periodic => value(n - 1, true),
            0 => value(0, false),
            _ => value(i - 1, true),
        });
        right.push(match i {
            i if i == n && periodic => value(0, false),
            i if i == n => value(n - 1, true),
            _ => value(i, false),
        });
    }
    FaceStates { left, right }
}

/// `c ± ¼(hi − lo)`, falling back to the one-sided `c ± ½(hi − c)` or `c ± ½(c − lo)`.
pub(crate) fn face_value(c: &[f64], lo: Option<&[f64]>, hi: Option<&[f64]>, plus: bool, out: &mut [f64]) {
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let s = if plus { 0.25 } else { -0.25 };
            for i in 0..c.len() {
                out[i] = c[i] + s * (hi[i] - lo[i]);
            }
        }
        (None, Some(hi)) => {
            let s = if plus { 0.5 } else { -0.5 };
            for i in 0..c.len() {
                out[i] = c[i] + s * (hi[i] - c[i]);
            }
        }
        (Some(lo), None) => {
            let s = if plus { 0.5 } else { -0.5 };
            for i in 0..c.len() {
                out[i] = c[i] + s * (c[i] - lo[i]);
            }
        }
        _ => out.copy_from_slice(c),
    }
}

use super::{Instance, Solution, VerifyError};
use crate::geom::{orientation, signed_area, ConvexPolygon, Orientation, Point, RegionIndex};
use crate::residual::Residual;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
}

/// A verification failure with a point that can be re-checked independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// `vertex` is where the piece turns the wrong way, folds back, or (for
    /// pieces that wind more than once) its first vertex.
    NonConvex { piece: usize, vertex: Point },
    /// `witness` lies in the piece and outside the region.
    NotContained { piece: usize, witness: Point },
    /// `witness` lies in the interior of the region and of no piece.
    Uncovered { witness: Point },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub verdict: Verdict,
    pub piece_count: usize,
    pub failures: Vec<Failure>,
}

impl CoverReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn first_uncovered(&self) -> Option<&Point> {
        self.failures.iter().find_map(|f| match f {
            Failure::Uncovered { witness } => Some(witness),
            _ => None,
        })
    }
}

fn bad_vertex(v: &[Point]) -> Point {
    let n = v.len();
    let ccw = signed_area(v).signum() >= 0;
    for i in 0..n {
        let (a, b, c) = (&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]);
        let o = orientation(a, b, c);
        if a == b || (o == Orientation::Cw) == ccw && o != Orientation::Collinear {
            return b.clone();
        }
        if o == Orientation::Collinear {
            let dot = &(&(&b.x - &a.x) * &(&c.x - &b.x)) + &(&(&b.y - &a.y) * &(&c.y - &b.y));
            if dot.signum() <= 0 {
                return b.clone();
            }
        }
    }
    v[0].clone()
}

pub fn verify_solution(inst: &Instance, sol: &Solution) -> Result<CoverReport, VerifyError> {
    if inst.name != sol.instance_name {
        return Err(VerifyError::WrongInstance { expected: inst.name.clone(), found: sol.instance_name.clone() });
    }
    let idx = RegionIndex::new(&inst.region);
    let mut failures = Vec::new();
    let mut convex = Vec::with_capacity(sol.pieces.len());
    for (i, p) in sol.pieces.iter().enumerate() {
        match ConvexPolygon::new(p.clone()) {
            Ok(c) => {
                if let Some(w) = idx.escape_witness(&c) {
                    failures.push(Failure::NotContained { piece: i, witness: w });
                }
                convex.push(c);
            }
            Err(_) => failures.push(Failure::NonConvex { piece: i, vertex: bad_vertex(p) }),
        }
    }
    let mut residual = Residual::new(&inst.region);
    for c in &convex {
        residual.subtract(c);
        if residual.is_empty() {
            break;
        }
    }
    failures.extend(residual.witnesses().into_iter().map(|w| Failure::Uncovered { witness: w }));
    let verdict = if failures.is_empty() { Verdict::Valid } else { Verdict::Invalid };
    Ok(CoverReport { verdict, piece_count: sol.pieces.len(), failures })
}

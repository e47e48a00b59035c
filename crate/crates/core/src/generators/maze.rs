use rand::Rng as _;

use super::{meta, GenError};
use crate::geom::{segments_intersect, Location, Point, PolygonWithHoles, Rational, SimplePolygon};
use crate::instance::Instance;
use crate::rng::{seeded, Rng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazeParams {
    pub grid_cols: usize,
    pub grid_rows: usize,
    pub cell_size: i64,
    pub removal_fraction: Rational,
    pub perturbation_fraction: Rational,
    pub perturbation_magnitude: i64,
    pub seed: u64,
}

impl MazeParams {
    pub fn new(grid_cols: usize, grid_rows: usize, seed: u64) -> Self {
        MazeParams {
            grid_cols,
            grid_rows,
            cell_size: 10,
            removal_fraction: Rational::new(1, 10),
            perturbation_fraction: Rational::new(1, 2),
            perturbation_magnitude: 4,
            seed,
        }
    }
}

const PERTURB_RETRIES: usize = 50;

/// `(p, q)` with `fraction = p / q`, both fitting in `u64`.
fn ratio(f: &Rational, what: &str) -> Result<(u64, u64), GenError> {
    let bad = || GenError::InvalidParams(format!("{what} must be a fraction in [0, 1]"));
    if f.signum() < 0 || *f > Rational::one() {
        return Err(bad());
    }
    let p = u64::try_from(f.numer()).map_err(|_| bad())?;
    let q = u64::try_from(f.denom()).map_err(|_| bad())?;
    Ok((p, q))
}

fn chance(rng: &mut Rng, (p, q): (u64, u64)) -> bool {
    rng.random_range(0..q) < p
}

fn square(x0: i64, y0: i64, s: i64) -> Vec<(i64, i64)> {
    vec![(x0, y0), (x0, y0 + s), (x0 + s, y0 + s), (x0 + s, y0)]
}

fn loop_of(c: &[(i64, i64)]) -> SimplePolygon {
    SimplePolygon::new_unchecked(c.iter().map(|&(x, y)| Point::int(x, y)).collect())
}

fn touches(a: &SimplePolygon, b: &SimplePolygon) -> bool {
    a.edges().any(|(p, q)| b.edges().any(|(r, s)| segments_intersect(p, q, r, s)))
        || a.classify(&b.vertices()[0]) != Location::Outside
        || b.classify(&a.vertices()[0]) != Location::Outside
}

/// Rectangular room with a grid of square obstacles separated by corridors
/// one cell wide. Obstacles are clockwise, starting at their lower-left corner.
pub fn gen_maze(params: &MazeParams) -> Result<Instance, GenError> {
    let bad = |m: &str| Err(GenError::InvalidParams(m.into()));
    if params.grid_cols < 2 || params.grid_rows < 2 {
        return bad("grid must be at least 2 by 2");
    }
    if params.cell_size <= 0 {
        return bad("cell size must be positive");
    }
    if params.perturbation_magnitude < 0 || params.perturbation_magnitude >= params.cell_size {
        return bad("perturbation magnitude must lie in [0, cell size)");
    }
    let removal = ratio(&params.removal_fraction, "removal fraction")?;
    let perturb = ratio(&params.perturbation_fraction, "perturbation fraction")?;
    let c = params.cell_size;
    let mag = params.perturbation_magnitude;
    let (w, h) = ((2 * params.grid_cols as i64 + 1) * c, (2 * params.grid_rows as i64 + 1) * c);
    let outer = loop_of(&[(0, 0), (w, 0), (w, h), (0, h)]);
    let mut rng = seeded(params.seed);

    let mut obstacles: Vec<Vec<(i64, i64)>> = Vec::new();
    let mut wants_perturb: Vec<bool> = Vec::new();
    for j in 0..params.grid_rows as i64 {
        for i in 0..params.grid_cols as i64 {
            if chance(&mut rng, removal) {
                continue;
            }
            obstacles.push(square((2 * i + 1) * c, (2 * j + 1) * c, c));
            wants_perturb.push(chance(&mut rng, perturb));
        }
    }
    let mut holes: Vec<SimplePolygon> = obstacles.iter().map(|o| loop_of(o)).collect();
    for k in 0..holes.len() {
        if !wants_perturb[k] || mag == 0 {
            continue;
        }
        let base = &obstacles[k];
        let (cx2, cy2) = (base[0].0 + base[2].0, base[0].1 + base[2].1);
        for _ in 0..PERTURB_RETRIES {
            let mask: u8 = rng.random_range(1..=15);
            let moved: Vec<(i64, i64)> = base
                .iter()
                .enumerate()
                .map(|(v, &(x, y))| {
                    if mask & (1 << v) == 0 {
                        return (x, y);
                    }
                    let dx = rng.random_range(0..=mag);
                    let dy = rng.random_range(0..=mag);
                    ((x + (2 * x - cx2).signum() * dx), (y + (2 * y - cy2).signum() * dy))
                })
                .collect();
            let cand = loop_of(&moved);
            let simple = SimplePolygon::new(cand.vertices().to_vec()).is_ok();
            let inside = cand.vertices().iter().all(|p| outer.classify(p) == Location::Interior);
            if simple && inside && !holes.iter().enumerate().any(|(m, o)| m != k && touches(&cand, o)) {
                holes[k] = cand;
                break;
            }
        }
    }
    let region = PolygonWithHoles::new(outer, holes).map_err(|e| GenError::InvalidParams(e.to_string()))?;
    let mut inst = Instance::new(format!("maze-{}x{}-s{}", params.grid_cols, params.grid_rows, params.seed), region);
    inst.meta = Some(meta(
        "maze",
        params.seed,
        &[
            ("grid_cols", params.grid_cols.to_string()),
            ("grid_rows", params.grid_rows.to_string()),
            ("cell_size", params.cell_size.to_string()),
            ("removal_fraction", params.removal_fraction.to_string()),
            ("perturbation_fraction", params.perturbation_fraction.to_string()),
            ("perturbation_magnitude", params.perturbation_magnitude.to_string()),
        ],
    ));
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_removed_is_empty_room() {
        let mut p = MazeParams::new(3, 4, 1);
        p.removal_fraction = Rational::one();
        let inst = gen_maze(&p).unwrap();
        assert!(inst.region.holes().is_empty());
        assert_eq!(inst.region.area(), Rational::from_int(70 * 90));
    }

    #[test]
    fn unperturbed_obstacles_are_squares() {
        let mut p = MazeParams::new(4, 3, 2);
        p.perturbation_fraction = Rational::zero();
        p.removal_fraction = Rational::zero();
        let inst = gen_maze(&p).unwrap();
        assert_eq!(inst.region.holes().len(), 12);
        for h in inst.region.holes() {
            let v = h.vertices();
            assert_eq!(v.len(), 4);
            assert_eq!(h.signed_area(), Rational::from_int(-100));
            assert!(v.iter().all(|q| q.is_integral()));
        }
    }

    #[test]
    fn perturbed_mazes_are_valid() {
        for seed in 0..20 {
            let mut p = MazeParams::new(3, 3, seed);
            p.perturbation_fraction = Rational::one();
            p.perturbation_magnitude = 9;
            let inst = gen_maze(&p).unwrap();
            inst.region.validate().unwrap();
            for (a, h) in inst.region.holes().iter().enumerate() {
                for g in &inst.region.holes()[a + 1..] {
                    assert!(!touches(h, g));
                }
            }
        }
    }

    #[test]
    fn bad_params() {
        let mut p = MazeParams::new(1, 3, 0);
        assert!(gen_maze(&p).is_err());
        p.grid_cols = 2;
        p.perturbation_magnitude = 10;
        assert!(matches!(gen_maze(&p), Err(GenError::InvalidParams(_))));
        p.perturbation_magnitude = 3;
        p.removal_fraction = Rational::new(3, 2);
        assert!(matches!(gen_maze(&p), Err(GenError::InvalidParams(_))));
        p.removal_fraction = Rational::zero();
        p.cell_size = 0;
        assert!(matches!(gen_maze(&p), Err(GenError::InvalidParams(_))));
    }
}

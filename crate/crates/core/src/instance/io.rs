use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::{Instance, IoError, Meta, Solution};
use crate::geom::{signed_area, Point, PolygonWithHoles, Rational, SimplePolygon};

/// A parsed document together with the repairs applied while reading it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    #[serde(rename = "type")]
    kind: String,
    name: String,
    outer_boundary: Vec<IntPoint>,
    #[serde(default)]
    holes: Vec<Vec<IntPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

#[derive(Serialize, Deserialize)]
struct IntPoint {
    x: Number,
    y: Number,
}

#[derive(Serialize, Deserialize)]
struct SolutionDoc {
    #[serde(rename = "type")]
    kind: String,
    instance: String,
    pieces: Vec<Vec<NumPoint>>,
}

#[derive(Serialize, Deserialize)]
struct NumPoint {
    x: Num,
    y: Num,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(Number),
    Frac { num: Number, den: Number },
}

fn parse_err(location: impl Into<String>, msg: impl Into<String>) -> IoError {
    IoError::Parse { location: location.into(), msg: msg.into() }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, IoError> {
    serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

fn int_of(n: &Number, at: &str) -> Result<BigInt, IoError> {
    n.to_string()
        .parse::<BigInt>()
        .map_err(|_| parse_err(at, format!("expected an integer, found {n}")))
}

fn number(v: &BigInt) -> Number {
    v.to_string().parse().expect("integer literal")
}

fn num_of(n: &Num, at: &str) -> Result<Rational, IoError> {
    match n {
        Num::Int(v) => Ok(Rational::from_bigint(int_of(v, at)?)),
        Num::Frac { num, den } => {
            let d = int_of(den, at)?;
            if d.sign() != num_bigint::Sign::Plus {
                return Err(parse_err(at, "denominator must be positive"));
            }
            Ok(Rational::from_bigints(int_of(num, at)?, d))
        }
    }
}

fn num_to(v: &Rational) -> Num {
    if v.is_integer() {
        Num::Int(number(&v.numer()))
    } else {
        Num::Frac { num: number(&v.numer()), den: number(&v.denom()) }
    }
}

fn int_point(p: &IntPoint, at: &str) -> Result<Point, IoError> {
    Ok(Point::new(
        Rational::from_bigint(int_of(&p.x, &format!("{at}.x"))?),
        Rational::from_bigint(int_of(&p.y, &format!("{at}.y"))?),
    ))
}

fn to_int_point(p: &Point) -> IntPoint {
    IntPoint { x: number(&p.x.numer()), y: number(&p.y.numer()) }
}

/// Reverses `v` if its orientation does not match `ccw`, recording a warning.
fn orient(mut v: Vec<Point>, ccw: bool, what: String, warnings: &mut Vec<String>) -> Vec<Point> {
    let s = signed_area(&v).signum();
    if s != 0 && (s > 0) != ccw {
        v.reverse();
        let want = if ccw { "counterclockwise" } else { "clockwise" };
        warnings.push(format!("{what} reoriented to {want}"));
    }
    v
}

pub fn parse_instance(text: &str) -> Result<Parsed<Instance>, IoError> {
    let doc: InstanceDoc = from_json(text)?;
    if doc.kind != "cover_instance" {
        return Err(parse_err("type", format!("expected \"cover_instance\", found {:?}", doc.kind)));
    }
    let mut warnings = Vec::new();
    let outer: Vec<Point> = doc
        .outer_boundary
        .iter()
        .enumerate()
        .map(|(i, p)| int_point(p, &format!("outer_boundary[{i}]")))
        .collect::<Result<_, _>>()?;
    let outer = orient(outer, true, "outer boundary".into(), &mut warnings);
    let invalid = |what: String, e: crate::geom::GeomError| IoError::InvalidInstance(format!("{what}: {e}"));
    let outer = SimplePolygon::new(outer).map_err(|e| invalid("outer boundary".into(), e))?;
    let mut holes = Vec::with_capacity(doc.holes.len());
    for (h, hole) in doc.holes.iter().enumerate() {
        let v: Vec<Point> = hole
            .iter()
            .enumerate()
            .map(|(i, p)| int_point(p, &format!("holes[{h}][{i}]")))
            .collect::<Result<_, _>>()?;
        let v = orient(v, false, format!("hole {h}"), &mut warnings);
        holes.push(SimplePolygon::new(v).map_err(|e| invalid(format!("hole {h}"), e))?);
    }
    let region = PolygonWithHoles::new(outer, holes).map_err(|e| invalid("region".into(), e))?;
    Ok(Parsed { value: Instance { name: doc.name, region, meta: doc.meta }, warnings })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let doc = InstanceDoc {
        kind: "cover_instance".into(),
        name: inst.name.clone(),
        outer_boundary: inst.region.outer().vertices().iter().map(to_int_point).collect(),
        holes: inst.region.holes().iter().map(|h| h.vertices().iter().map(to_int_point).collect()).collect(),
        meta: inst.meta.clone(),
    };
    let mut s = serde_json::to_string(&doc).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_solution(text: &str) -> Result<Parsed<Solution>, IoError> {
    let doc: SolutionDoc = from_json(text)?;
    if doc.kind != "cover_solution" {
        return Err(parse_err("type", format!("expected \"cover_solution\", found {:?}", doc.kind)));
    }
    let mut warnings = Vec::new();
    let mut pieces = Vec::with_capacity(doc.pieces.len());
    for (k, piece) in doc.pieces.iter().enumerate() {
        let v: Vec<Point> = piece
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let at = format!("pieces[{k}][{i}]");
                Ok(Point::new(num_of(&p.x, &format!("{at}.x"))?, num_of(&p.y, &format!("{at}.y"))?))
            })
            .collect::<Result<_, IoError>>()?;
        if v.len() < 3 {
            return Err(IoError::InvalidSolution(format!("piece {k} has {} vertices", v.len())));
        }
        if signed_area(&v).is_zero() {
            return Err(IoError::InvalidSolution(format!("piece {k} has zero area")));
        }
        pieces.push(orient(v, true, format!("piece {k}"), &mut warnings));
    }
    Ok(Parsed { value: Solution { instance_name: doc.instance, pieces }, warnings })
}

/// Pieces are written counterclockwise.
pub fn serialize_solution(sol: &Solution) -> String {
    let doc = SolutionDoc {
        kind: "cover_solution".into(),
        instance: sol.instance_name.clone(),
        pieces: sol
            .pieces
            .iter()
            .map(|p| {
                let mut v = p.clone();
                if signed_area(&v).signum() < 0 {
                    v.reverse();
                }
                v.iter().map(|q| NumPoint { x: num_to(&q.x), y: num_to(&q.y) }).collect()
            })
            .collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{"type":"cover_instance","name":"sq","outer_boundary":[{"x":0,"y":0},{"x":4,"y":0},{"x":4,"y":4},{"x":0,"y":4}],"holes":[]}"#;

    #[test]
    fn minimal_square() {
        let p = parse_instance(SQUARE).unwrap();
        assert!(p.warnings.is_empty());
        assert_eq!(p.value.region.outer().len(), 4);
        assert!(p.value.region.holes().is_empty());
        assert_eq!(serialize_instance(&p.value).trim_end(), SQUARE);
    }

    #[test]
    fn orientation_repaired_with_warning() {
        let doc = r#"{"type":"cover_instance","name":"sq","outer_boundary":[{"x":0,"y":0},{"x":0,"y":4},{"x":4,"y":4},{"x":4,"y":0}],"holes":[[{"x":1,"y":1},{"x":2,"y":1},{"x":2,"y":2}]]}"#;
        let p = parse_instance(doc).unwrap();
        assert_eq!(p.warnings.len(), 2);
        assert_eq!(p.value.region.area(), Rational::new(31, 2));
    }

    #[test]
    fn instance_errors() {
        let crossing = r#"{"type":"cover_instance","name":"x","outer_boundary":[{"x":0,"y":0},{"x":4,"y":0},{"x":4,"y":4},{"x":0,"y":4}],"holes":[[{"x":3,"y":1},{"x":5,"y":1},{"x":5,"y":2}]]}"#;
        assert!(matches!(parse_instance(crossing), Err(IoError::InvalidInstance(_))));
        let frac = SQUARE.replace(r#""x":4,"y":0"#, r#""x":4.5,"y":0"#);
        assert!(matches!(parse_instance(&frac), Err(IoError::Parse { .. })));
        let broken = &SQUARE[..SQUARE.len() - 3];
        match parse_instance(broken) {
            Err(IoError::Parse { location, .. }) => assert!(location.starts_with("line 1")),
            other => panic!("{other:?}"),
        }
        let kind = SQUARE.replace("cover_instance", "cover_solution");
        assert!(matches!(parse_instance(&kind), Err(IoError::Parse { .. })));
    }

    #[test]
    fn exact_rationals_round_trip() {
        let doc = r#"{"type":"cover_solution","instance":"sq","pieces":[[{"x":0,"y":0},{"x":1,"y":0},{"x":{"num":1,"den":3},"y":{"num":2,"den":3}}]]}"#;
        let p = parse_solution(doc).unwrap();
        assert_eq!(p.value.pieces[0][2], Point::new(Rational::new(1, 3), Rational::new(2, 3)));
        assert_eq!(serialize_solution(&p.value).trim_end(), doc);
        let big = r#"{"type":"cover_solution","instance":"sq","pieces":[[{"x":0,"y":0},{"x":123456789012345678901234567890,"y":0},{"x":0,"y":{"num":1,"den":98765432109876543210}}]]}"#;
        let p = parse_solution(big).unwrap();
        assert_eq!(serialize_solution(&p.value).trim_end(), big);
    }

    #[test]
    fn solution_errors() {
        let two = r#"{"type":"cover_solution","instance":"sq","pieces":[[{"x":0,"y":0},{"x":1,"y":0}]]}"#;
        assert!(matches!(parse_solution(two), Err(IoError::InvalidSolution(_))));
        let flat =
            r#"{"type":"cover_solution","instance":"sq","pieces":[[{"x":0,"y":0},{"x":1,"y":0},{"x":2,"y":0}]]}"#;
        assert!(matches!(parse_solution(flat), Err(IoError::InvalidSolution(_))));
        let den0 = r#"{"type":"cover_solution","instance":"sq","pieces":[[{"x":0,"y":0},{"x":1,"y":0},{"x":{"num":1,"den":0},"y":1}]]}"#;
        assert!(matches!(parse_solution(den0), Err(IoError::Parse { .. })));
    }

    #[test]
    fn clockwise_piece_is_reversed() {
        let doc = r#"{"type":"cover_solution","instance":"sq","pieces":[[{"x":0,"y":0},{"x":0,"y":1},{"x":1,"y":0}]]}"#;
        let p = parse_solution(doc).unwrap();
        assert_eq!(p.warnings.len(), 1);
        assert!(signed_area(&p.value.pieces[0]).signum() > 0);
    }
}

use serde_json::{json, Map, Value};

use super::{DomainError, EdgeLabel, Polygon, Vertex, VertexKind, VertexTag};
use crate::geom::{HPoint, IdealPoint};

/// Serialize a polygon to the interchange schema: a vertex list with
/// `kind`, coordinates and `tag`, the edge label cycle, and a caller
/// supplied `meta` object.
pub fn polygon_to_json(poly: &Polygon, meta: Value) -> Value {
    let vertices: Vec<Value> = poly
        .vertices()
        .iter()
        .map(|v| match v.kind {
            VertexKind::Ideal(IdealPoint::Finite(x)) => json!({
                "kind": "ideal",
                "x": x,
                "tag": v.tag.to_string(),
            }),
            VertexKind::Ideal(IdealPoint::Infinity) => json!({
                "kind": "ideal",
                "x": Value::Null,
                "tag": v.tag.to_string(),
            }),
            VertexKind::Interior(p) => json!({
                "kind": "interior",
                "x": p.x,
                "y": p.y,
                "tag": v.tag.to_string(),
            }),
        })
        .collect();
    let labels: Vec<Value> = poly
        .labels()
        .iter()
        .map(|l| match l {
            EdgeLabel::A => json!("A"),
            EdgeLabel::B => json!("B"),
        })
        .collect();
    json!({
        "vertices": vertices,
        "edge_labels": labels,
        "meta": meta,
    })
}

/// Parse a polygon from the interchange schema.
pub fn polygon_from_json(value: &Value) -> Result<Polygon, DomainError> {
    let bad = |msg: &str| DomainError::BadJson(msg.to_string());
    let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
    let vertices = parse_vertices(obj)?;
    let labels = obj
        .get("edge_labels")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing edge_labels"))?
        .iter()
        .map(|l| match l.as_str() {
            Some("A") => Ok(EdgeLabel::A),
            Some("B") => Ok(EdgeLabel::B),
            _ => Err(bad("edge labels are \"A\" or \"B\"")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Polygon::new(vertices, labels)
}

fn parse_vertices(obj: &Map<String, Value>) -> Result<Vec<Vertex>, DomainError> {
    let bad = |msg: String| DomainError::BadJson(msg);
    obj.get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing vertices".into()))?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let v = v
                .as_object()
                .ok_or_else(|| bad(format!("vertex {i} is not an object")))?;
            let tag: VertexTag = v
                .get("tag")
                .and_then(Value::as_str)
                .ok_or_else(|| bad(format!("vertex {i} has no tag")))?
                .parse()?;
            let x = v.get("x").cloned().unwrap_or(Value::Null);
            let kind = match v.get("kind").and_then(Value::as_str) {
                Some("ideal") => match x.as_f64() {
                    Some(x) => VertexKind::Ideal(IdealPoint::Finite(x)),
                    None => VertexKind::Ideal(IdealPoint::Infinity),
                },
                Some("interior") => {
                    let x = x
                        .as_f64()
                        .ok_or_else(|| bad(format!("vertex {i} needs a numeric x")))?;
                    let y = v
                        .get("y")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| bad(format!("vertex {i} needs a numeric y")))?;
                    if y <= 0.0 {
                        return Err(bad(format!("vertex {i} has y <= 0")));
                    }
                    VertexKind::Interior(HPoint::new(x, y))
                }
                _ => return Err(bad(format!("vertex {i} kind must be ideal or interior"))),
            };
            Ok(Vertex { kind, tag })
        })
        .collect()
}

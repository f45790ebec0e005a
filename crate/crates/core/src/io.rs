//! JSON interchange for signatures, diagrams, and interpretations.
//!
//! A document is one object with optional keys `signature`, `diagrams`
//! (a list of named diagrams), and `interpretation`. Diagrams name wires and
//! boxes by id; legs and box ports list wire ids in order. Matrix rows are
//! output joint states.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::canonical::canonical_form;
use crate::diagram::Diagram;
use crate::error::{DiagramError, EvalError, FormatError, Violation};
use crate::eval::Interpretation;
use crate::hypergraph::{HyperBox, LabeledHypergraph, Wire};
use crate::signature::{BoxSignature, Signature};

/// A signature, named diagrams over it, and an interpretation of it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DocumentBundle {
    pub signature: Option<Arc<Signature>>,
    pub diagrams: Vec<(String, Diagram)>,
    pub interpretation: Option<Interpretation>,
}

impl DocumentBundle {
    pub fn with_signature(signature: Arc<Signature>) -> Self {
        DocumentBundle {
            signature: Some(signature),
            ..Default::default()
        }
    }

    pub fn diagram(&self, name: &str) -> Option<&Diagram> {
        self.diagrams.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// Adds or replaces a diagram.
    pub fn insert(&mut self, name: &str, d: Diagram) {
        match self.diagrams.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = d,
            None => self.diagrams.push((name.to_string(), d)),
        }
    }

    /// Every diagram replaced by its canonical form.
    pub fn canonicalized(&self) -> DocumentBundle {
        DocumentBundle {
            signature: self.signature.clone(),
            diagrams: self
                .diagrams
                .iter()
                .map(|(n, d)| (n.clone(), canonical_form(d).diagram))
                .collect(),
            interpretation: self.interpretation.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    sorts: Vec<String>,
    boxes: Vec<BoxSignature>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBox {
    pub id: String,
    #[serde(rename = "box")]
    pub label: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

/// A diagram as written in a document, with wires referenced by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagram {
    pub name: String,
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub wires: Vec<Wire>,
    pub boxes: Vec<RawBox>,
    pub p: Vec<String>,
    pub q: Vec<String>,
}

impl RawDiagram {
    pub fn from_diagram(name: &str, d: &Diagram) -> Self {
        let g = d.graph();
        let ids = |xs: &[usize]| xs.iter().map(|&w| g.wires[w].id.clone()).collect();
        RawDiagram {
            name: name.to_string(),
            dom: d.dom().to_vec(),
            cod: d.cod().to_vec(),
            wires: g.wires.clone(),
            boxes: g
                .boxes
                .iter()
                .map(|b| RawBox {
                    id: b.id.clone(),
                    label: b.label.clone(),
                    inputs: ids(&b.inputs),
                    outputs: ids(&b.outputs),
                })
                .collect(),
            p: ids(d.p()),
            q: ids(d.q()),
        }
    }

    /// Resolves wire ids (first occurrence wins) and validates. Returns every
    /// violation found.
    pub fn resolve(&self, signature: &Arc<Signature>) -> Result<Diagram, Vec<Violation>> {
        let mut index = BTreeMap::new();
        for (i, w) in self.wires.iter().enumerate() {
            index.entry(w.id.as_str()).or_insert(i);
        }
        let mut unknown = Vec::new();
        let mut lookup = |context: String, ids: &[String]| -> Vec<usize> {
            ids.iter()
                .filter_map(|id| {
                    let hit = index.get(id.as_str()).copied();
                    if hit.is_none() {
                        unknown.push(Violation::UnknownWire {
                            context: context.clone(),
                            wire: id.clone(),
                        });
                    }
                    hit
                })
                .collect()
        };
        let boxes: Vec<HyperBox> = self
            .boxes
            .iter()
            .map(|b| HyperBox {
                id: b.id.clone(),
                label: b.label.clone(),
                inputs: lookup(format!("box `{}` inputs", b.id), &b.inputs),
                outputs: lookup(format!("box `{}` outputs", b.id), &b.outputs),
            })
            .collect();
        let p = lookup("leg p".into(), &self.p);
        let q = lookup("leg q".into(), &self.q);
        if !unknown.is_empty() {
            return Err(unknown);
        }
        let graph = LabeledHypergraph::new(self.wires.clone(), boxes);
        let d = Diagram::from_parts(signature.clone(), self.dom.clone(), self.cod.clone(), graph, p, q)
            .map_err(|e| match e {
                DiagramError::Invalid(v) => v,
                other => unreachable!("from_parts only reports range errors: {other}"),
            })?;
        let mut violations: Vec<Violation> = self
            .dom
            .iter()
            .chain(&self.cod)
            .filter(|s| !signature.has_sort(s))
            .map(|s| Violation::UnknownSort {
                wire: "(interface)".into(),
                sort: s.clone(),
            })
            .collect();
        violations.extend(d.validate());
        if violations.is_empty() {
            Ok(d)
        } else {
            Err(violations)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterpretation {
    sort_sizes: BTreeMap<String, usize>,
    boxes: BTreeMap<String, RawMatrix>,
}

/// A parsed document whose diagrams have not been required to be valid.
#[derive(Debug, Clone)]
pub struct LenientBundle {
    pub signature: Option<Arc<Signature>>,
    pub diagrams: Vec<(String, Result<Diagram, Vec<Violation>>)>,
    pub interpretation: Option<Interpretation>,
}

fn schema(path: impl Into<String>, message: impl ToString) -> FormatError {
    FormatError::Schema {
        path: path.into(),
        message: message.to_string(),
    }
}

fn syntax(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn field<T: for<'de> Deserialize<'de>>(value: &Value, path: &str) -> Result<T, FormatError> {
    T::deserialize(value).map_err(|e| schema(path, e))
}

fn signature_from(value: &Value) -> Result<Signature, FormatError> {
    let raw: RawSignature = field(value, "signature")?;
    Signature::new(raw.sorts, raw.boxes).map_err(|e| schema("signature", e))
}

fn interpretation_from(value: &Value, signature: &Arc<Signature>, path: &str) -> Result<Interpretation, FormatError> {
    let raw: RawInterpretation = field(value, path)?;
    let matrices = raw.boxes.into_iter().map(|(k, m)| (k, m.matrix)).collect();
    Ok(Interpretation::new(signature.clone(), raw.sort_sizes, matrices)?)
}

/// Parses a document, keeping invalid diagrams together with their
/// violations instead of failing.
pub fn parse_lenient(text: &str) -> Result<LenientBundle, FormatError> {
    let value = syntax(text)?;
    let obj = value.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !["signature", "diagrams", "interpretation"].contains(&k.as_str())) {
        return Err(schema(k.clone(), "unknown key"));
    }
    let signature = obj.get("signature").map(signature_from).transpose()?.map(Arc::new);
    let need_signature = |path: &str| -> Result<&Arc<Signature>, FormatError> {
        signature.as_ref().ok_or_else(|| schema(path, "requires a signature"))
    };
    let mut diagrams = Vec::new();
    if let Some(list) = obj.get("diagrams") {
        let list = list.as_array().ok_or_else(|| schema("diagrams", "expected a list"))?;
        let sig = need_signature("diagrams")?;
        let mut names = HashSet::new();
        for (i, v) in list.iter().enumerate() {
            let path = format!("diagrams[{i}]");
            let raw: RawDiagram = field(v, &path)?;
            if !names.insert(raw.name.clone()) {
                return Err(schema(format!("{path}.name"), format!("duplicate diagram name `{}`", raw.name)));
            }
            diagrams.push((raw.name.clone(), raw.resolve(sig)));
        }
    }
    let interpretation = match obj.get("interpretation") {
        Some(v) => Some(interpretation_from(v, need_signature("interpretation")?, "interpretation")?),
        None => None,
    };
    Ok(LenientBundle {
        signature,
        diagrams,
        interpretation,
    })
}

/// Parses a document, rejecting it if any diagram is invalid.
pub fn parse(text: &str) -> Result<DocumentBundle, FormatError> {
    let lenient = parse_lenient(text)?;
    let diagrams = lenient
        .diagrams
        .into_iter()
        .map(|(name, r)| match r {
            Ok(d) => Ok((name, d)),
            Err(violations) => Err(FormatError::Validation { name, violations }),
        })
        .collect::<Result<_, _>>()?;
    Ok(DocumentBundle {
        signature: lenient.signature,
        diagrams,
        interpretation: lenient.interpretation,
    })
}

/// Reads an interpretation for `signature`, given either as a whole
/// document with an `interpretation` key or as a bare interpretation object.
/// A document that declares its own signature must declare the same one.
pub fn parse_interpretation(text: &str, signature: &Arc<Signature>) -> Result<Interpretation, FormatError> {
    let value = syntax(text)?;
    if value.get("sort_sizes").is_some() {
        return interpretation_from(&value, signature, "$");
    }
    if let Some(sig) = value.get("signature") {
        if signature_from(sig)? != **signature {
            return Err(EvalError::SignatureMismatch.into());
        }
    }
    let v = value
        .get("interpretation")
        .ok_or_else(|| schema("interpretation", "missing"))?;
    interpretation_from(v, signature, "interpretation")
}

/// Reads a matrix given as a list of rows or as `{"matrix": rows}`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, FormatError> {
    let value = syntax(text)?;
    if value.is_object() {
        return field::<RawMatrix>(&value, "$").map(|m| m.matrix);
    }
    field(&value, "$")
}

/// Decimal rendering with 17 significant digits, trailing zeros dropped.
/// Round-trips every finite `f64`.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let n = digits.len() as i32;
    if !(-7..21).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        };
    }
    if exp < 0 {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if exp + 1 >= n {
        format!("{sign}{digits}{}", "0".repeat((exp + 1 - n) as usize))
    } else {
        let (int, frac) = digits.split_at((exp + 1) as usize);
        format!("{sign}{int}.{frac}")
    }
}

fn number(x: f64) -> Value {
    Value::Number(format_f64(x).parse::<Number>().expect("valid JSON number"))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

pub fn signature_to_value(sig: &Signature) -> Value {
    to_value(&RawSignature {
        sorts: sig.sorts().to_vec(),
        boxes: sig.boxes().to_vec(),
    })
}

pub fn diagram_to_value(name: &str, d: &Diagram) -> Value {
    to_value(&RawDiagram::from_diagram(name, d))
}

pub fn interpretation_to_value(interp: &Interpretation) -> Value {
    let boxes: Map<String, Value> = interp
        .box_values()
        .iter()
        .map(|(name, k)| {
            let rows = k
                .to_rows()
                .into_iter()
                .map(|row| Value::Array(row.into_iter().map(number).collect()))
                .collect();
            let mut m = Map::new();
            m.insert("matrix".into(), Value::Array(rows));
            (name.clone(), Value::Object(m))
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("sort_sizes".into(), to_value(interp.sort_sizes()));
    obj.insert("boxes".into(), Value::Object(boxes));
    Value::Object(obj)
}

/// A matrix as JSON rows with 17-significant-digit entries.
pub fn matrix_to_value(rows: &[Vec<f64>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().copied().map(number).collect()))
            .collect(),
    )
}

pub fn bundle_to_value(bundle: &DocumentBundle) -> Value {
    let mut obj = Map::new();
    if let Some(sig) = &bundle.signature {
        obj.insert("signature".into(), signature_to_value(sig));
    }
    if !bundle.diagrams.is_empty() {
        let list = bundle.diagrams.iter().map(|(n, d)| diagram_to_value(n, d)).collect();
        obj.insert("diagrams".into(), Value::Array(list));
    }
    if let Some(interp) = &bundle.interpretation {
        obj.insert("interpretation".into(), interpretation_to_value(interp));
    }
    Value::Object(obj)
}

/// Deterministic JSON, ending in a newline. Arrays and objects whose
/// members are all scalars stay on one line; everything else is indented.
pub fn serialize(bundle: &DocumentBundle) -> String {
    to_text(&bundle_to_value(bundle))
}

/// [`serialize`]'s layout for any JSON value.
pub fn to_text(value: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, value, 0);
    s.push('\n');
    s
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar_text(v: &Value) -> String {
    serde_json::to_string(v).expect("scalars serialize")
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(xs) if xs.is_empty() => out.push_str("[]"),
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Array(xs) if xs.iter().all(is_scalar) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            out.push_str(&format!("[{}]", items.join(", ")));
        }
        Value::Object(m) if m.values().all(is_scalar) => {
            let items: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{}: {}", scalar_text(&Value::String(k.clone())), scalar_text(x)))
                .collect();
            out.push_str(&format!("{{{}}}", items.join(", ")));
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&scalar_text(&Value::String(k.clone())));
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar_text(scalar)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::iso_equal;
    use crate::samples;

    fn network_bundle() -> DocumentBundle {
        let mut b = DocumentBundle::with_signature(Arc::new(samples::sample_signature()));
        b.insert("network", samples::two_f_network());
        b.insert("bloom", samples::network_bloom());
        b
    }

    #[test]
    fn empty_document() {
        assert_eq!(serialize(&DocumentBundle::default()).trim(), "{}");
        assert_eq!(parse("{}").unwrap(), DocumentBundle::default());
    }

    #[test]
    fn round_trip() {
        let b = network_bundle();
        let text = serialize(&b);
        let back = parse(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(serialize(&back), text);
        let canon = b.canonicalized();
        assert_eq!(serialize(&parse(&serialize(&canon)).unwrap()), serialize(&canon));
        assert!(iso_equal(back.diagram("network").unwrap(), &samples::two_f_network()).unwrap());
    }

    #[test]
    fn rejects_invalid_diagrams() {
        let mut b = DocumentBundle::with_signature(Arc::new(samples::sample_signature()));
        b.insert("shared", samples::shared_wire());
        match parse(&serialize(&b)) {
            Err(FormatError::Validation { name, violations }) => {
                assert_eq!(name, "shared");
                assert!(violations.iter().any(|v| v.class() == "LeftMonogamy"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let lenient = parse_lenient(&serialize(&b)).unwrap();
        assert!(lenient.diagrams[0].1.is_err());
    }

    #[test]
    fn syntax_and_schema_errors() {
        assert!(matches!(parse("{\n  \"signature\": ["), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse("[]"), Err(FormatError::Schema { .. })));
        assert!(matches!(parse(r#"{"bogus": 1}"#), Err(FormatError::Schema { path, .. }) if path == "bogus"));
        let missing_sig = r#"{"diagrams": []}"#;
        assert!(matches!(parse(missing_sig), Err(FormatError::Schema { path, .. }) if path == "diagrams"));
        let bad = r#"{"signature": {"sorts": ["A"], "boxes": []}, "diagrams": [{"name": "x"}]}"#;
        assert!(matches!(parse(bad), Err(FormatError::Schema { path, .. }) if path == "diagrams[0]"));
        let unknown_wire = r#"{"signature": {"sorts": ["A"], "boxes": []},
            "diagrams": [{"name": "x", "dom": [], "cod": ["A"], "wires": [], "boxes": [], "p": [], "q": ["nope"]}]}"#;
        match parse(unknown_wire) {
            Err(FormatError::Validation { violations, .. }) => assert_eq!(violations[0].class(), "UnknownWire"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn interpretations() {
        let sig = Arc::new(samples::chain_signature());
        let text = r#"{"sort_sizes": {"A": 2}, "boxes": {"h": {"matrix": [[0.9, 0.2], [0.1, 0.8]]}}}"#;
        let interp = parse_interpretation(text, &sig).unwrap();
        let mut b = DocumentBundle::with_signature(sig.clone());
        b.interpretation = Some(interp.clone());
        let out = serialize(&b);
        assert!(out.contains("0.90000000000000002"));
        assert_eq!(parse(&out).unwrap().interpretation, Some(interp.clone()));
        assert_eq!(parse_interpretation(&out, &sig).unwrap(), interp);
        let other = Arc::new(samples::fork_signature());
        assert!(matches!(
            parse_interpretation(&out, &other),
            Err(FormatError::Interpretation(EvalError::SignatureMismatch))
        ));
    }

    #[test]
    fn number_format() {
        for (x, s) in [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-2.25, "-2.25"),
            (0.1, "0.10000000000000001"),
            (1e-9, "1.0000000000000001e-9"),
            (123456.0, "123456"),
        ] {
            assert_eq!(format_f64(x), s);
        }
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 6.02e23, -7.5e-8] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}

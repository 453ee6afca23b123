//! Serializable descriptors: every group, order, morphism, and sequence is
//! reconstructible from a JSON value, and equality of oracles is equality
//! of descriptors. Builders report failures with the JSON path of the
//! offending field, e.g. "$.ses.group.n".
//!
//! Group descriptors use a "type" tag; ordering descriptors use "kind".
//! Morphisms are named strings: "identity", "inclusion_axis_<i>",
//! "heisenberg_to_z2", "scale_z_<f>". Elements are arrays of integers,
//! with decimal strings accepted and emitted beyond the i64 range.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::construct::{
    cofinal_central, lex_extend, pullback, quotient_circular, Ses, SesKind,
    DEFAULT_COFINALITY_BOUND,
};
use crate::error::{Error, Result};
use crate::groups::{Element, Group, GroupRepr};
use crate::morphism::{MorKind, Morphism};
use crate::orders::{cone_from_secret, CircEval, CircularOrder, ConeEval, LeftOrder};

impl Group {
    pub fn descriptor(&self) -> Value {
        match self.repr() {
            GroupRepr::Cyclic { n } => json!({"type": "cyclic", "n": n}),
            GroupRepr::FreeAbelian { k } => json!({"type": "free_abelian", "k": k}),
            GroupRepr::Tararin { k } => json!({"type": "tararin", "k": k}),
            GroupRepr::TararinExt { k, n } => json!({"type": "tararin_ext", "k": k, "n": n}),
            GroupRepr::ZTimesCyclic { n } => json!({"type": "z_times_cyclic", "n": n}),
            GroupRepr::Heisenberg => json!({"type": "heisenberg"}),
            GroupRepr::Lift { order, .. } => json!({"type": "lift", "of": order.descriptor()}),
        }
    }
}

impl Morphism {
    pub fn descriptor(&self) -> Value {
        match self.kind() {
            MorKind::Identity => json!("identity"),
            MorKind::InclusionAxis { axis } => json!(format!("inclusion_axis_{}", axis)),
            MorKind::HeisenbergToZ2 => json!("heisenberg_to_z2"),
            MorKind::ScaleZ { factor } => json!(format!("scale_z_{}", factor)),
        }
    }
}

impl Ses {
    pub fn descriptor(&self) -> Value {
        match self.kind() {
            SesKind::ModTorsion => {
                json!({"type": "mod_torsion", "group": self.total().descriptor()})
            }
            SesKind::HeisenbergCenter => json!({"type": "heisenberg_center"}),
        }
    }
}

impl LeftOrder {
    pub fn descriptor(&self) -> Value {
        match self.eval_kind() {
            ConeEval::Lex { signs, .. } => json!({
                "kind": "lex",
                "group": self.group().descriptor(),
                "signs": signs,
            }),
            ConeEval::LiftCone => {
                let order = self
                    .group()
                    .lift_order()
                    .expect("lift cone orders a lift group");
                json!({"kind": "lift_cone", "of": order.descriptor()})
            }
            ConeEval::Pullback { of, phi } => json!({
                "kind": "restriction",
                "of": of.descriptor(),
                "phi": phi.descriptor(),
            }),
            ConeEval::FromCircular { of } => {
                json!({"kind": "from_circular", "of": of.descriptor()})
            }
        }
    }
}

impl CircularOrder {
    pub fn descriptor(&self) -> Value {
        match self.eval_kind() {
            CircEval::Secret { cone } => match cone.eval_kind() {
                ConeEval::Lex { signs, .. } => json!({
                    "kind": "secret_lex",
                    "group": cone.group().descriptor(),
                    "signs": signs,
                }),
                _ => json!({"kind": "secret", "cone": cone.descriptor()}),
            },
            CircEval::CyclicStandard { n, unit } => json!({
                "kind": "cyclic_standard",
                "group": {"type": "cyclic", "n": n},
                "unit": unit,
            }),
            CircEval::CyclicArrangement { n, pos } => {
                let mut arrangement = vec![0u64; pos.len()];
                for (residue, &position) in pos.iter().enumerate() {
                    arrangement[position as usize] = residue as u64;
                }
                json!({"kind": "cyclic_arrangement", "n": n, "arrangement": arrangement})
            }
            CircEval::ConstPlus => json!({
                "kind": "const_plus",
                "group": self.group().descriptor(),
            }),
            CircEval::Conjugated { of, by, .. } => json!({
                "kind": "conjugated",
                "of": of.descriptor(),
                "by": element_to_value(by),
            }),
            CircEval::Pullback { of, phi } => json!({
                "kind": "pullback",
                "of": of.descriptor(),
                "phi": phi.descriptor(),
            }),
            CircEval::LexSes {
                ses,
                kernel,
                quotient,
            } => json!({
                "kind": "lex_ses",
                "ses": ses.descriptor(),
                "kernel_order": kernel.descriptor(),
                "quotient_order": quotient.descriptor(),
            }),
            CircEval::ApproxDn { h_order, z, n, .. } => json!({
                "kind": "approx_dn",
                "h": h_order.group().descriptor(),
                "h_order": h_order.descriptor(),
                "z": element_to_value(z),
                "n": n,
            }),
            CircEval::QuotientReps { h_order, z, n, .. } => json!({
                "kind": "quotient_mod_z",
                "h": h_order.group().descriptor(),
                "h_order": h_order.descriptor(),
                "z": element_to_value(z),
                "n": n,
            }),
        }
    }
}

/// Coordinates of an element, as JSON integers where they fit and decimal
/// strings beyond.
pub fn element_to_value(e: &Element) -> Value {
    Value::Array(
        e.coords()
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => json!(v),
                None => json!(c.to_string()),
            })
            .collect(),
    )
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::descriptor(path, "expected a JSON object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::descriptor(format!("{}.{}", path, key), "missing field"))
}

fn str_field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str> {
    field(m, key, path)?
        .as_str()
        .ok_or_else(|| Error::descriptor(format!("{}.{}", path, key), "expected a string"))
}

fn u64_field(m: &Map<String, Value>, key: &str, path: &str) -> Result<u64> {
    field(m, key, path)?.as_u64().ok_or_else(|| {
        Error::descriptor(format!("{}.{}", path, key), "expected an unsigned integer")
    })
}

fn usize_field(m: &Map<String, Value>, key: &str, path: &str) -> Result<usize> {
    Ok(u64_field(m, key, path)? as usize)
}

fn coordinate(v: &Value, path: &str) -> Result<BigInt> {
    if let Some(x) = v.as_i64() {
        return Ok(BigInt::from(x));
    }
    if let Some(s) = v.as_str() {
        return s
            .parse::<BigInt>()
            .map_err(|_| Error::descriptor(path, "expected a decimal integer string"));
    }
    Err(Error::descriptor(path, "expected an integer coordinate"))
}

/// Parses an element of `group` from an array of coordinates; a bare
/// integer is accepted for one-coordinate groups.
pub fn build_element(group: &Group, v: &Value, path: &str) -> Result<Element> {
    let coords = match v {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, item)| coordinate(item, &format!("{}[{}]", path, i)))
            .collect::<Result<Vec<_>>>()?,
        other if group.arity() == 1 => vec![coordinate(other, path)?],
        _ => return Err(Error::descriptor(path, "expected a coordinate array")),
    };
    group
        .element(coords)
        .map_err(|e| Error::descriptor(path, e.to_string()))
}

pub fn build_group(v: &Value, path: &str) -> Result<Group> {
    let m = as_object(v, path)?;
    let tag = str_field(m, "type", path)?;
    let wrap = |r: crate::error::Result<Group>| r.map_err(|e| Error::descriptor(path, e.to_string()));
    match tag {
        "cyclic" => wrap(Group::cyclic(u64_field(m, "n", path)?)),
        "free_abelian" => wrap(Group::free_abelian(usize_field(m, "k", path)?)),
        "tararin" => wrap(Group::tararin(usize_field(m, "k", path)?)),
        "tararin_ext" => wrap(Group::tararin_ext(
            usize_field(m, "k", path)?,
            u64_field(m, "n", path)?,
        )),
        "z_times_cyclic" => wrap(Group::z_times_cyclic(u64_field(m, "n", path)?)),
        "heisenberg" => Ok(Group::heisenberg()),
        "lift" => {
            let of = build_ordering(field(m, "of", path)?, &format!("{}.of", path))?;
            Ok(Group::lift(of))
        }
        other => Err(Error::descriptor(
            format!("{}.type", path),
            format!("unknown group type '{}'", other),
        )),
    }
}

fn signs_field(m: &Map<String, Value>, path: &str) -> Result<Vec<i8>> {
    let signs_path = format!("{}.signs", path);
    let arr = field(m, "signs", path)?
        .as_array()
        .ok_or_else(|| Error::descriptor(&signs_path, "expected an array of signs"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_i64()
                .and_then(|x| i8::try_from(x).ok())
                .ok_or_else(|| {
                    Error::descriptor(format!("{}[{}]", signs_path, i), "expected +1 or -1")
                })
        })
        .collect()
}

/// Parses a named morphism into `codomain`.
pub fn build_morphism(v: &Value, codomain: &Group, path: &str) -> Result<Morphism> {
    let name = v
        .as_str()
        .ok_or_else(|| Error::descriptor(path, "expected a morphism name"))?;
    let check_codomain = |m: Morphism| {
        if m.codomain() == codomain {
            Ok(m)
        } else {
            Err(Error::descriptor(
                path,
                format!(
                    "morphism '{}' maps into {}, not {}",
                    name,
                    m.codomain().name(),
                    codomain.name()
                ),
            ))
        }
    };
    if name == "identity" {
        return Ok(Morphism::identity(codomain.clone()));
    }
    if name == "heisenberg_to_z2" {
        return check_codomain(Morphism::heisenberg_to_z2());
    }
    if let Some(axis) = name.strip_prefix("inclusion_axis_") {
        let axis: usize = axis
            .parse()
            .map_err(|_| Error::descriptor(path, "expected an axis index"))?;
        return Morphism::inclusion_axis(axis, codomain.clone())
            .map_err(|e| Error::descriptor(path, e.to_string()));
    }
    if let Some(factor) = name.strip_prefix("scale_z_") {
        let factor: BigInt = factor
            .parse()
            .map_err(|_| Error::descriptor(path, "expected an integer factor"))?;
        return check_codomain(Morphism::scale_z(factor));
    }
    Err(Error::descriptor(
        path,
        format!("unknown morphism '{}'", name),
    ))
}

pub fn build_ses(v: &Value, path: &str) -> Result<Ses> {
    let m = as_object(v, path)?;
    match str_field(m, "type", path)? {
        "mod_torsion" => {
            let group = build_group(field(m, "group", path)?, &format!("{}.group", path))?;
            Ses::mod_torsion(&group).map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "heisenberg_center" => Ok(Ses::heisenberg_center()),
        other => Err(Error::descriptor(
            format!("{}.type", path),
            format!("unknown sequence type '{}'", other),
        )),
    }
}

pub fn build_left_order(v: &Value, path: &str) -> Result<LeftOrder> {
    let m = as_object(v, path)?;
    match str_field(m, "kind", path)? {
        "lex" => {
            let group = build_group(field(m, "group", path)?, &format!("{}.group", path))?;
            let signs = signs_field(m, path)?;
            LeftOrder::lex(group, signs).map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "lift_cone" => {
            let of = build_ordering(field(m, "of", path)?, &format!("{}.of", path))?;
            Ok(LeftOrder::lift_cone(of))
        }
        "restriction" => {
            let of = build_left_order(field(m, "of", path)?, &format!("{}.of", path))?;
            let phi = build_morphism(
                field(m, "phi", path)?,
                of.group(),
                &format!("{}.phi", path),
            )?;
            LeftOrder::restrict(of, phi).map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "from_circular" => {
            let of = build_ordering(field(m, "of", path)?, &format!("{}.of", path))?;
            cone_from_secret(&of).map_err(|e| Error::descriptor(path, e.to_string()))
        }
        other => Err(Error::descriptor(
            format!("{}.kind", path),
            format!("unknown left-order kind '{}'", other),
        )),
    }
}

fn build_datum(
    m: &Map<String, Value>,
    path: &str,
) -> Result<(crate::construct::CofinalCentralDatum, u64)> {
    let h = build_group(field(m, "h", path)?, &format!("{}.h", path))?;
    let h_order = match m.get("h_order") {
        Some(v) => build_left_order(v, &format!("{}.h_order", path))?,
        None => LeftOrder::lex(h.clone(), vec![1; h.arity()])
            .map_err(|e| Error::descriptor(path, e.to_string()))?,
    };
    if h_order.group() != &h {
        return Err(Error::descriptor(
            format!("{}.h_order", path),
            "order does not match the group in 'h'",
        ));
    }
    let z = build_element(&h, field(m, "z", path)?, &format!("{}.z", path))?;
    let n = u64_field(m, "n", path)?;
    let datum = cofinal_central(&h_order, &z, DEFAULT_COFINALITY_BOUND)
        .map_err(|e| Error::descriptor(path, e.to_string()))?;
    Ok((datum, n))
}

pub fn build_ordering(v: &Value, path: &str) -> Result<CircularOrder> {
    let m = as_object(v, path)?;
    match str_field(m, "kind", path)? {
        "secret_lex" => {
            let group = build_group(field(m, "group", path)?, &format!("{}.group", path))?;
            let signs = signs_field(m, path)?;
            let cone =
                LeftOrder::lex(group, signs).map_err(|e| Error::descriptor(path, e.to_string()))?;
            Ok(CircularOrder::secret(cone))
        }
        "secret" => {
            let cone = build_left_order(field(m, "cone", path)?, &format!("{}.cone", path))?;
            Ok(CircularOrder::secret(cone))
        }
        "cyclic_standard" => {
            let group = build_group(field(m, "group", path)?, &format!("{}.group", path))?;
            let n = match group.repr() {
                GroupRepr::Cyclic { n } => *n,
                _ => {
                    return Err(Error::descriptor(
                        format!("{}.group", path),
                        "expected a cyclic group",
                    ))
                }
            };
            let unit = u64_field(m, "unit", path)?;
            CircularOrder::cyclic_standard(n, unit)
                .map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "cyclic_arrangement" => {
            let n = u64_field(m, "n", path)?;
            let arr_path = format!("{}.arrangement", path);
            let arr = field(m, "arrangement", path)?
                .as_array()
                .ok_or_else(|| Error::descriptor(&arr_path, "expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.as_u64().ok_or_else(|| {
                        Error::descriptor(format!("{}[{}]", arr_path, i), "expected a residue")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            CircularOrder::cyclic_arrangement(n, &arr)
                .map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "const_plus" => {
            let group = build_group(field(m, "group", path)?, &format!("{}.group", path))?;
            Ok(CircularOrder::const_plus(group))
        }
        "conjugated" => {
            let of = build_ordering(field(m, "of", path)?, &format!("{}.of", path))?;
            let by = build_element(of.group(), field(m, "by", path)?, &format!("{}.by", path))?;
            Ok(of.conjugate(&by))
        }
        "pullback" => {
            let of = build_ordering(field(m, "of", path)?, &format!("{}.of", path))?;
            let phi = build_morphism(
                field(m, "phi", path)?,
                of.group(),
                &format!("{}.phi", path),
            )?;
            pullback(&of, &phi).map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "lex_ses" => {
            let ses = build_ses(field(m, "ses", path)?, &format!("{}.ses", path))?;
            let kernel = build_left_order(
                field(m, "kernel_order", path)?,
                &format!("{}.kernel_order", path),
            )?;
            let quotient = build_ordering(
                field(m, "quotient_order", path)?,
                &format!("{}.quotient_order", path),
            )?;
            lex_extend(&ses, &kernel, &quotient)
                .map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "approx_dn" => {
            let (datum, n) = build_datum(m, path)?;
            crate::construct::approx_dn(&datum, n)
                .map_err(|e| Error::descriptor(path, e.to_string()))
        }
        "quotient_mod_z" => {
            let (datum, n) = build_datum(m, path)?;
            quotient_circular(&datum, n).map_err(|e| Error::descriptor(path, e.to_string()))
        }
        other => Err(Error::descriptor(
            format!("{}.kind", path),
            format!("unknown ordering kind '{}'", other),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip_ordering(c: &CircularOrder) {
        let d = c.descriptor();
        let rebuilt = build_ordering(&d, "$").unwrap();
        assert_eq!(rebuilt.descriptor(), d);
        assert_eq!(&rebuilt, c);
    }

    #[test]
    fn group_descriptors_roundtrip() {
        let groups = [
            Group::cyclic(6).unwrap(),
            Group::free_abelian(2).unwrap(),
            Group::tararin(3).unwrap(),
            Group::tararin_ext(1, 2).unwrap(),
            Group::z_times_cyclic(3).unwrap(),
            Group::heisenberg(),
            Group::lift(CircularOrder::cyclic_standard(3, 1).unwrap()),
        ];
        for g in groups {
            let d = g.descriptor();
            let rebuilt = build_group(&d, "$").unwrap();
            assert_eq!(rebuilt.descriptor(), d);
            assert_eq!(rebuilt, g);
        }
    }

    #[test]
    fn ordering_descriptors_roundtrip() {
        let z2 = Group::free_abelian(2).unwrap();
        let cone = LeftOrder::lex(z2.clone(), vec![1, -1]).unwrap();
        roundtrip_ordering(&CircularOrder::secret(cone));
        roundtrip_ordering(&CircularOrder::cyclic_standard(5, 2).unwrap());
        roundtrip_ordering(&CircularOrder::cyclic_arrangement(4, &[0, 2, 1, 3]).unwrap());
        let c3 = CircularOrder::cyclic_standard(3, 1).unwrap();
        let by = c3.group().element_from_i64(&[1]).unwrap();
        roundtrip_ordering(&c3.conjugate(&by));

        let g2 = Group::z_times_cyclic(2).unwrap();
        let ses = Ses::mod_torsion(&g2).unwrap();
        let kernel = LeftOrder::lex(Group::free_abelian(1).unwrap(), vec![1]).unwrap();
        let lexsed = lex_extend(
            &ses,
            &kernel,
            &CircularOrder::cyclic_standard(2, 1).unwrap(),
        )
        .unwrap();
        roundtrip_ordering(&lexsed);

        let h = Group::free_abelian(1).unwrap();
        let order = LeftOrder::lex(h.clone(), vec![1]).unwrap();
        let z = h.element_from_i64(&[1]).unwrap();
        let datum = cofinal_central(&order, &z, 64).unwrap();
        roundtrip_ordering(&crate::construct::approx_dn(&datum, 4).unwrap());
        roundtrip_ordering(&quotient_circular(&datum, 3).unwrap());
        let doubled = pullback(
            &crate::construct::approx_dn(&datum, 4).unwrap(),
            &Morphism::scale_z(BigInt::from(2)),
        )
        .unwrap();
        roundtrip_ordering(&doubled);
    }

    #[test]
    fn left_order_descriptors_roundtrip() {
        let orders = [
            LeftOrder::lex(Group::tararin(2).unwrap(), vec![1, -1]).unwrap(),
            LeftOrder::lift_cone(CircularOrder::cyclic_standard(3, 1).unwrap()),
            LeftOrder::restrict(
                LeftOrder::lex(Group::free_abelian(2).unwrap(), vec![1, 1]).unwrap(),
                Morphism::inclusion_axis(0, Group::free_abelian(2).unwrap()).unwrap(),
            )
            .unwrap(),
        ];
        for o in orders {
            let d = o.descriptor();
            let rebuilt = build_left_order(&d, "$").unwrap();
            assert_eq!(rebuilt.descriptor(), d);
        }
    }

    #[test]
    fn errors_carry_json_paths() {
        let missing = json!({"type": "cyclic"});
        let err = build_group(&missing, "$").unwrap_err().to_string();
        assert!(err.contains("$.n"), "got: {}", err);

        let nested = json!({
            "kind": "lex_ses",
            "ses": {"type": "mod_torsion", "group": {"type": "heisenberg"}},
            "kernel_order": {"kind": "lex", "group": {"type": "free_abelian", "k": 1}, "signs": [1]},
            "quotient_order": {"kind": "cyclic_standard", "group": {"type": "cyclic", "n": 2}, "unit": 1},
        });
        let err = build_ordering(&nested, "$").unwrap_err().to_string();
        assert!(err.contains("$.ses"), "got: {}", err);

        let bad_unit = json!({
            "kind": "cyclic_standard",
            "group": {"type": "cyclic", "n": 6},
            "unit": 2,
        });
        assert!(build_ordering(&bad_unit, "$").is_err());

        let bad_sign = json!({
            "kind": "secret_lex",
            "group": {"type": "free_abelian", "k": 1},
            "signs": [2],
        });
        assert!(build_ordering(&bad_sign, "$").is_err());
    }

    #[test]
    fn elements_roundtrip_with_large_coordinates() {
        let z = Group::free_abelian(1).unwrap();
        let big: BigInt = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let e = z.element(vec![big.clone()]).unwrap();
        let v = element_to_value(&e);
        assert_eq!(v[0], json!(big.to_string()));
        let rebuilt = build_element(&z, &v, "$").unwrap();
        assert_eq!(rebuilt, e);
        assert_eq!(
            build_element(&z, &json!(-3), "$").unwrap(),
            z.element_from_i64(&[-3]).unwrap()
        );
        assert!(build_element(&z, &json!([1, 2]), "$").is_err());
    }

    #[test]
    fn morphism_names_roundtrip() {
        let z2 = Group::free_abelian(2).unwrap();
        let cases = [
            Morphism::identity(z2.clone()),
            Morphism::inclusion_axis(1, z2.clone()).unwrap(),
        ];
        for phi in cases {
            let d = phi.descriptor();
            let rebuilt = build_morphism(&d, &z2, "$").unwrap();
            assert_eq!(rebuilt.descriptor(), d);
        }
        let scale = Morphism::scale_z(BigInt::from(-3));
        let z = Group::free_abelian(1).unwrap();
        let rebuilt = build_morphism(&scale.descriptor(), &z, "$").unwrap();
        assert_eq!(rebuilt.descriptor(), scale.descriptor());
        assert!(build_morphism(&json!("heisenberg_to_z2"), &z, "$").is_err());
        assert!(build_morphism(&json!("nonsense"), &z, "$").is_err());
    }
}

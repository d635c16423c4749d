//! JSON and CSV formats.

/// Serde adapter writing a scalar as its exact string and accepting either
/// a string (`"p/q"`, decimal) or a JSON number.
pub mod scalar {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::scalar::Scalar;

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub enum Repr {
        Str(String),
        Num(serde_json::Number),
    }

    pub fn parse<S: Scalar, E: de::Error>(v: Repr) -> Result<S, E> {
        let text = match v {
            Repr::Str(s) => s,
            Repr::Num(n) => n.to_string(),
        };
        S::parse_exact(&text).map_err(E::custom)
    }

    pub fn serialize<S: Scalar, Z: Serializer>(x: &S, z: Z) -> Result<Z::Ok, Z::Error> {
        z.serialize_str(&x.to_exact_string())
    }

    pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(d: D) -> Result<S, D::Error> {
        parse(Repr::deserialize(d)?)
    }

    pub(crate) use Repr as ScalarRepr;
}

pub mod scalar_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::scalar::{parse, ScalarRepr};
    use crate::scalar::Scalar;

    pub fn serialize<S: Scalar, Z: Serializer>(xs: &[S], z: Z) -> Result<Z::Ok, Z::Error> {
        let mut seq = z.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_exact_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(d: D) -> Result<Vec<S>, D::Error> {
        Vec::<ScalarRepr>::deserialize(d)?
            .into_iter()
            .map(parse)
            .collect()
    }
}

mod descriptors {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    use super::scalar::{parse, ScalarRepr};
    use crate::interval::IntervalUnion;
    use crate::nd::{FiberedSet, GridSpec};
    use crate::rearrange::{LevelSet, StepFunction};
    use crate::scalar::Scalar;
    use crate::setmap::{MapKind, Orientation, SetMap1D};

    #[derive(Serialize)]
    struct UnionOut {
        #[serde(rename = "type")]
        kind: &'static str,
        components: Vec<[String; 2]>,
    }

    #[derive(Deserialize)]
    struct UnionIn {
        #[serde(rename = "type")]
        kind: String,
        components: Vec<(ScalarRepr, ScalarRepr)>,
    }

    fn union_components<S: Scalar>(a: &IntervalUnion<S>) -> Vec<[String; 2]> {
        a.components()
            .iter()
            .map(|c| [c.lo.to_exact_string(), c.hi.to_exact_string()])
            .collect()
    }

    fn union_from_pairs<S: Scalar, E: de::Error>(
        pairs: Vec<(ScalarRepr, ScalarRepr)>,
    ) -> Result<IntervalUnion<S>, E> {
        let mut out = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            let (lo, hi): (S, S) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(E::custom(format!("component [{lo}, {hi}] is reversed")));
            }
            out.push((lo, hi));
        }
        Ok(IntervalUnion::from_pairs(out))
    }

    /// `{"type":"interval_union","components":[["p/q","r/s"],…]}`.
    impl<S: Scalar> Serialize for IntervalUnion<S> {
        fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
            UnionOut {
                kind: "interval_union",
                components: union_components(self),
            }
            .serialize(z)
        }
    }

    impl<'de, S: Scalar> Deserialize<'de> for IntervalUnion<S> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = UnionIn::deserialize(d)?;
            if raw.kind != "interval_union" {
                return Err(de::Error::custom(format!(
                    "expected an interval_union, got {:?}",
                    raw.kind
                )));
            }
            union_from_pairs(raw.components)
        }
    }

    #[derive(Serialize)]
    struct MapOut {
        kind: MapKind,
        t0: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        orient: Option<Orientation>,
        #[serde(skip_serializing_if = "Option::is_none")]
        b: Option<String>,
    }

    #[derive(Deserialize)]
    struct MapIn {
        kind: MapKind,
        t0: ScalarRepr,
        #[serde(default)]
        orient: Orientation,
        b: Option<ScalarRepr>,
    }

    /// `{"kind":"solynin","t0":"0","orient":"+"}`; Brock carries `"b"`.
    impl<S: Scalar> Serialize for SetMap1D<S> {
        fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
            let oriented = matches!(self.kind, MapKind::Polarization | MapKind::Solynin);
            MapOut {
                kind: self.kind,
                t0: self.center.to_exact_string(),
                orient: oriented.then_some(self.orientation),
                b: (self.kind == MapKind::Brock).then(|| self.b.to_exact_string()),
            }
            .serialize(z)
        }
    }

    impl<'de, S: Scalar> Deserialize<'de> for SetMap1D<S> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = MapIn::deserialize(d)?;
            let t0: S = parse(raw.t0)?;
            Ok(match raw.kind {
                MapKind::Reflection => SetMap1D::reflection(t0),
                MapKind::Polarization => SetMap1D::polarization(t0, raw.orient),
                MapKind::Steiner => SetMap1D::steiner(t0),
                MapKind::Solynin => SetMap1D::solynin(t0, raw.orient),
                MapKind::Brock => {
                    let b = raw.b.ok_or_else(|| de::Error::missing_field("b"))?;
                    SetMap1D::brock(t0, parse(b)?).map_err(de::Error::custom)?
                }
            })
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(bound = "")]
    struct FiberedRepr<S: Scalar> {
        axis: usize,
        grid: GridSpec<S>,
        fibers: Vec<(Vec<usize>, IntervalUnion<S>)>,
    }

    /// `{"axis":…,"grid":{…},"fibers":[[[i,j,…],{set}],…]}`.
    impl<S: Scalar> Serialize for FiberedSet<S> {
        fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
            FiberedRepr {
                axis: self.axis,
                grid: self.grid.clone(),
                fibers: self
                    .fibers
                    .iter()
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            }
            .serialize(z)
        }
    }

    impl<'de, S: Scalar> Deserialize<'de> for FiberedSet<S> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = FiberedRepr::<S>::deserialize(d)?;
            if raw.axis > raw.grid.dim() {
                return Err(de::Error::custom(format!("axis {} out of range", raw.axis)));
            }
            for (k, _) in &raw.fibers {
                if k.len() != raw.grid.dim() || k.iter().zip(&raw.grid.counts).any(|(i, n)| i >= n)
                {
                    return Err(de::Error::custom(format!(
                        "fiber index {k:?} outside the grid"
                    )));
                }
            }
            Ok(FiberedSet::from_fibers(raw.axis, raw.grid, raw.fibers))
        }
    }

    #[derive(Serialize)]
    struct StepOut<'a, L> {
        levels: Vec<String>,
        sets: &'a [L],
    }

    #[derive(Deserialize)]
    struct StepIn<L> {
        levels: Vec<ScalarRepr>,
        sets: Vec<L>,
    }

    /// `{"levels":["2","1"],"sets":[…nested sets…]}`.
    impl<S: Scalar, L: LevelSet<S> + Serialize> Serialize for StepFunction<S, L> {
        fn serialize<Z: Serializer>(&self, z: Z) -> Result<Z::Ok, Z::Error> {
            StepOut {
                levels: self.levels().iter().map(|a| a.to_exact_string()).collect(),
                sets: self.sets(),
            }
            .serialize(z)
        }
    }

    impl<'de, S: Scalar, L: LevelSet<S> + Deserialize<'de>> Deserialize<'de> for StepFunction<S, L> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let raw = StepIn::<L>::deserialize(d)?;
            let levels = raw
                .levels
                .into_iter()
                .map(parse)
                .collect::<Result<Vec<S>, D::Error>>()?;
            StepFunction::new(levels, raw.sets).map_err(de::Error::custom)
        }
    }
}

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::rearrange::GridFunction1D;
use crate::scalar::Scalar;

pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Writes `x,value` rows with exact scalars.
pub fn write_grid_csv<S: Scalar, W: Write>(f: &GridFunction1D<S>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "value"]).map_err(csv_err)?;
    for (i, v) in f.values.iter().enumerate() {
        w.write_record([f.x(i as i64).to_exact_string(), v.to_exact_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Descriptor(e.to_string()))
}

/// Reads `x,value` rows; the `x` column must be an arithmetic progression.
pub fn read_grid_csv<S: Scalar, R: Read>(input: R) -> Result<GridFunction1D<S>> {
    let mut r = csv::Reader::from_reader(input);
    let mut xs: Vec<S> = Vec::new();
    let mut values = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err)?;
        let field = |i: usize| {
            row.get(i)
                .ok_or_else(|| Error::Descriptor(format!("row {:?} needs two columns", row)))
        };
        xs.push(S::parse_exact(field(0)?.trim())?);
        values.push(S::parse_exact(field(1)?.trim())?);
    }
    let (Some(first), Some(second)) = (xs.first(), xs.get(1)) else {
        return Err(Error::Descriptor(
            "a grid function needs at least two rows".into(),
        ));
    };
    let h = second.clone() - first.clone();
    for (i, x) in xs.iter().enumerate() {
        let expected = first.clone() + S::from_int(i as i64) * h.clone();
        let close = if S::IS_EXACT {
            *x == expected
        } else {
            (x.clone() - expected).abs().as_f64() <= 1e-9 * h.as_f64().abs()
        };
        if !close {
            return Err(Error::Descriptor(format!(
                "x column is not evenly spaced at row {}",
                i + 1
            )));
        }
    }
    GridFunction1D::new(first.clone(), h, values)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Descriptor(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::{Fold, FoldChain};
    use crate::interval::IntervalUnion;
    use crate::nd::{fibered_from_shape, FiberedSet, GridSpec, Shape};
    use crate::rearrange::StepFunction;
    use crate::scalar::q;
    use crate::setmap::{Orientation, SetMap1D};
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn set_descriptor_round_trip() {
        let a: IntervalUnion<Q> =
            from_json(r#"{"type":"interval_union","components":[["-3/2","0.25"],[1,"2"]]}"#)
                .unwrap();
        assert_eq!(
            a,
            IntervalUnion::from_pairs(vec![(q(-3, 2), q(1, 4)), (q(1, 1), q(2, 1))])
        );
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(
            text,
            r#"{"type":"interval_union","components":[["-3/2","1/4"],["1","2"]]}"#
        );
        assert!(from_json::<IntervalUnion<Q>>(r#"{"type":"ball","components":[]}"#).is_err());
        assert!(from_json::<IntervalUnion<Q>>(
            r#"{"type":"interval_union","components":[["2","1"]]}"#
        )
        .is_err());
    }

    #[test]
    fn map_descriptor_round_trip() {
        let m: SetMap1D<Q> = from_json(r#"{"kind":"solynin","t0":"0","orient":"+"}"#).unwrap();
        assert_eq!(m, SetMap1D::solynin(q(0, 1), Orientation::Positive));
        let b = SetMap1D::brock(q(1, 3), q(1, 2)).unwrap();
        let text = serde_json::to_string(&b).unwrap();
        assert_eq!(text, r#"{"kind":"brock","t0":"1/3","b":"1/2"}"#);
        assert_eq!(from_json::<SetMap1D<Q>>(&text).unwrap(), b);
        assert!(from_json::<SetMap1D<Q>>(r#"{"kind":"brock","t0":"0","b":"2"}"#).is_err());
    }

    #[test]
    fn fold_chain_descriptor() {
        let chain: FoldChain<Q> =
            from_json(r#"[{"kind":"fold","u":[0,1],"t0":"1/2","orient":"+"},{"kind":"fold","u":["1","-1"],"t0":"0","orient":"-"}]"#).unwrap();
        assert_eq!(
            chain.folds[0],
            Fold::new(vec![q(0, 1), q(1, 1)], q(1, 2), Orientation::Positive).unwrap()
        );
        let back: FoldChain<Q> = from_json(&to_json(&chain).unwrap()).unwrap();
        assert_eq!(back, chain);
        assert!(to_json(&chain).unwrap().contains(r#""kind": "fold""#));
    }

    #[test]
    fn fibered_and_step_round_trip() {
        let grid = GridSpec::centered(1, q(1, 1), q(1, 2)).unwrap();
        let disk = Shape::Ball {
            center: vec![q(0, 1), q(0, 1)],
            r: q(1, 1),
        };
        let f: FiberedSet<Q> = fibered_from_shape(&disk, &grid, 1).unwrap();
        let back: FiberedSet<Q> = from_json(&to_json(&f).unwrap()).unwrap();
        assert_eq!(back, f);

        let s: StepFunction<Q, IntervalUnion<Q>> = from_json(
            r#"{"levels":["2","1"],"sets":[{"type":"interval_union","components":[["0","1"]]},{"type":"interval_union","components":[["0","3"]]}]}"#,
        )
        .unwrap();
        assert_eq!(s.levels(), &[q(2, 1), q(1, 1)]);
        assert_eq!(
            from_json::<StepFunction<Q, IntervalUnion<Q>>>(&to_json(&s).unwrap()).unwrap(),
            s
        );
        let not_nested = r#"{"levels":["2","1"],"sets":[{"type":"interval_union","components":[["0","3"]]},{"type":"interval_union","components":[["0","1"]]}]}"#;
        assert!(from_json::<StepFunction<Q, IntervalUnion<Q>>>(not_nested).is_err());
    }

    #[test]
    fn grid_csv_round_trip() {
        let f = GridFunction1D::new(q(-1, 2), q(1, 4), vec![q(0, 1), q(3, 2), q(1, 3)]).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&f, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "x,value\n-1/2,0\n-1/4,3/2\n0,1/3\n"
        );
        assert_eq!(read_grid_csv::<Q, _>(&buf[..]).unwrap(), f);
        assert!(read_grid_csv::<Q, _>("x,value\n0,1\n1,1\n3,1\n".as_bytes()).is_err());
    }
}

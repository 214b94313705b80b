//! Problem files: the JSON layout and its decoded form.

use std::collections::BTreeSet;
use std::path::Path;

use multitile_core::polytope::Facet as FacetOf;
use multitile_core::scalar::{parse_rational, GeneratorKind};
use multitile_core::{
    Coset, CosetFamily, Error, Facet, Generator, Lattice, Polytope, ProbeDirection, Rational, Result, Scalar,
    WindowMultiset,
};
use serde::{Deserialize, Serialize};

use crate::codec::{encode, encode_vec, generator_value, Declarations, ScalarJson};

pub const SCHEMA_VERSION: u32 = 1;

type Vector = Vec<ScalarJson>;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn one() -> u64 {
    1
}

fn unit_weights() -> [u64; 2] {
    [1, 1]
}

fn default_jmax() -> u64 {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorJson>,
    pub polytope: PolytopeJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translations: Option<TranslationsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub render: Option<RenderJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    /// `sqrt:<rational>` or `sym:<name>`.
    pub key: String,
    /// Nested enclosing intervals, for symbolic generators only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intervals: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolytopeJson {
    Box { lower: Vector, upper: Vector },
    Vertices(Vec<Vector>),
    Facets(Vec<FacetJson>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetJson {
    pub normal: Vector,
    pub offset: ScalarJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosetJson {
    /// Basis vectors; the integer lattice when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vector>>,
    pub translation: Vector,
    #[serde(default = "one")]
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowPointJson {
    pub point: Vector,
    #[serde(default = "one")]
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TranslationsJson {
    Cosets(Vec<CosetJson>),
    Window(Vec<WindowPointJson>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vector>>,
    pub offsets: Vec<Vector>,
}

/// 1-based coset indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitJson {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefinementJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vector>>,
    pub t1: Vector,
    pub t2: Vector,
    #[serde(default = "unit_weights")]
    pub weights: [u64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylJson {
    pub a: Vector,
    pub eps: String,
    #[serde(default = "default_jmax")]
    pub jmax: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxJson {
    pub lower: Vector,
    pub upper: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderJson {
    pub window: BoxJson,
    /// Fill colors by coset index, cycled.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub palette: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolytopeSpec {
    Box { lower: Vec<Scalar>, upper: Vec<Scalar> },
    Vertices(Vec<Vec<Scalar>>),
    Facets(Vec<Facet>),
}

impl PolytopeSpec {
    pub fn dim(&self) -> usize {
        match self {
            PolytopeSpec::Box { lower, .. } => lower.len(),
            PolytopeSpec::Vertices(v) => v.first().map_or(0, Vec::len),
            PolytopeSpec::Facets(f) => f.first().map_or(0, |f| f.normal.len()),
        }
    }

    pub fn build(&self) -> Result<Polytope> {
        match self {
            PolytopeSpec::Box { lower, upper } => Polytope::from_box(lower, upper),
            PolytopeSpec::Vertices(v) => Polytope::from_vertices(v),
            PolytopeSpec::Facets(f) => Polytope::from_facets(self.dim(), f.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TranslationSpec {
    Cosets(Vec<Coset>),
    Window(WindowMultiset),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementSpec {
    pub lattice: Lattice,
    pub t1: Vec<Scalar>,
    pub t2: Vec<Scalar>,
    pub weights: (u64, u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylSpec {
    pub a: Vec<Scalar>,
    pub eps: Rational,
    pub jmax: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub lower: Vec<Scalar>,
    pub upper: Vec<Scalar>,
    pub palette: Vec<String>,
}

/// A decoded problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub generators: Vec<Generator>,
    pub polytope: PolytopeSpec,
    pub probe: Option<ProbeDirection>,
    pub translations: Option<TranslationSpec>,
    pub family: Option<CosetFamily>,
    /// 0-based.
    pub split: Option<(Vec<usize>, Vec<usize>)>,
    pub refinement: Option<RefinementSpec>,
    pub weyl: Option<WeylSpec>,
    pub render: Option<RenderSpec>,
}

/// Reads `key` into a generator and the value the key stands for.
fn declare(g: &GeneratorJson) -> Result<(Generator, Scalar)> {
    if let Some(r) = g.key.strip_prefix("sqrt:") {
        let value = Scalar::sqrt(&parse_rational(r)?)?;
        let generator = match value.terms() {
            [(gen, _)] => gen.clone(),
            _ => {
                return Err(Error::InvalidGenerator(format!(
                    "{}: the square root is rational",
                    g.key
                )))
            }
        };
        if !g.intervals.is_empty() {
            return Err(Error::InvalidGenerator(format!("{}: surds take no intervals", g.key)));
        }
        return Ok((generator, value));
    }
    if let Some(name) = g.key.strip_prefix("sym:") {
        let intervals = g
            .intervals
            .iter()
            .map(|[lo, hi]| Ok((parse_rational(lo)?, parse_rational(hi)?)))
            .collect::<Result<Vec<_>>>()?;
        let generator = Generator::symbolic(name, intervals)?;
        return Ok((generator.clone(), generator_value(&generator)));
    }
    Err(Error::InvalidGenerator(format!(
        "generator key {:?} must start with sqrt: or sym:",
        g.key
    )))
}

fn check_dim(v: &[Scalar], d: usize) -> Result<()> {
    if v.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: v.len(),
        });
    }
    Ok(())
}

fn lattice(decl: &Declarations, basis: &Option<Vec<Vector>>, d: usize) -> Result<Lattice> {
    match basis {
        None => Ok(Lattice::integer(d)),
        Some(cols) => {
            let cols = cols.iter().map(|c| decl.decode_vec(c)).collect::<Result<Vec<_>>>()?;
            let lat = Lattice::new(cols)?;
            if lat.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: lat.dim(),
                });
            }
            Ok(lat)
        }
    }
}

fn vector(decl: &Declarations, v: &[ScalarJson], d: usize) -> Result<Vec<Scalar>> {
    let out = decl.decode_vec(v)?;
    check_dim(&out, d)?;
    Ok(out)
}

fn zero_based(ids: &[usize]) -> Result<Vec<usize>> {
    ids.iter()
        .map(|&i| {
            i.checked_sub(1)
                .ok_or_else(|| Error::InvalidInput("coset indices are 1-based".into()))
        })
        .collect()
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Problem::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Problem> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Problem::decode(&file)
    }

    pub fn decode(file: &ProblemFile) -> Result<Problem> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        let mut decl = Declarations::default();
        let mut generators = Vec::new();
        let mut seen = BTreeSet::new();
        for g in &file.generators {
            if !seen.insert(g.key.clone()) {
                return Err(Error::InvalidGenerator(format!("{} declared twice", g.key)));
            }
            let (generator, value) = declare(g)?;
            decl.insert(g.key.clone(), value);
            if !generators.contains(&generator) {
                generators.push(generator);
            }
        }

        let polytope = match &file.polytope {
            PolytopeJson::Box { lower, upper } => PolytopeSpec::Box {
                lower: decl.decode_vec(lower)?,
                upper: decl.decode_vec(upper)?,
            },
            PolytopeJson::Vertices(vs) => {
                PolytopeSpec::Vertices(vs.iter().map(|v| decl.decode_vec(v)).collect::<Result<_>>()?)
            }
            PolytopeJson::Facets(fs) => PolytopeSpec::Facets(
                fs.iter()
                    .map(|f| {
                        Ok(FacetOf {
                            normal: decl.decode_vec(&f.normal)?,
                            offset: decl.decode(&f.offset)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        let d = polytope.build()?.dim();

        let probe = match &file.probe {
            None => None,
            Some(h) => {
                if h.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: h.len(),
                    });
                }
                Some(ProbeDirection::new(h.clone()))
            }
        };

        let translations = match &file.translations {
            None => None,
            Some(TranslationsJson::Cosets(cs)) => {
                if cs.is_empty() {
                    return Err(Error::InvalidInput("no cosets given".into()));
                }
                Some(TranslationSpec::Cosets(
                    cs.iter()
                        .map(|c| {
                            Coset::new(
                                lattice(&decl, &c.basis, d)?,
                                vector(&decl, &c.translation, d)?,
                                c.weight,
                            )
                        })
                        .collect::<Result<_>>()?,
                ))
            }
            Some(TranslationsJson::Window(ps)) => Some(TranslationSpec::Window(WindowMultiset::new(
                ps.iter()
                    .map(|p| Ok((vector(&decl, &p.point, d)?, p.weight)))
                    .collect::<Result<_>>()?,
            )?)),
        };

        let family = match &file.family {
            None => None,
            Some(f) => Some(CosetFamily::new(
                lattice(&decl, &f.basis, d)?,
                f.offsets.iter().map(|o| vector(&decl, o, d)).collect::<Result<_>>()?,
            )?),
        };

        let split = match &file.split {
            None => None,
            Some(s) => Some((zero_based(&s.first)?, zero_based(&s.second)?)),
        };

        let refinement = match &file.refinement {
            None => None,
            Some(r) => Some(RefinementSpec {
                lattice: lattice(&decl, &r.basis, d)?,
                t1: vector(&decl, &r.t1, d)?,
                t2: vector(&decl, &r.t2, d)?,
                weights: (r.weights[0], r.weights[1]),
            }),
        };

        let weyl = match &file.weyl {
            None => None,
            Some(w) => Some(WeylSpec {
                a: decl.decode_vec(&w.a)?,
                eps: parse_rational(&w.eps)?,
                jmax: w.jmax,
            }),
        };

        let render = match &file.render {
            None => None,
            Some(r) => Some(RenderSpec {
                lower: vector(&decl, &r.window.lower, d)?,
                upper: vector(&decl, &r.window.upper, d)?,
                palette: r.palette.clone(),
            }),
        };

        Ok(Problem {
            generators,
            polytope,
            probe,
            translations,
            family,
            split,
            refinement,
            weyl,
            render,
        })
    }

    /// The file form. Generators are written under their canonical keys.
    pub fn encode(&self) -> ProblemFile {
        let basis = |l: &Lattice| -> Option<Vec<Vector>> {
            if *l == Lattice::integer(l.dim()) {
                None
            } else {
                Some(l.basis().iter().map(|c| encode_vec(c)).collect())
            }
        };
        ProblemFile {
            schema_version: SCHEMA_VERSION,
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorJson {
                    key: g.key(),
                    intervals: match g.kind() {
                        GeneratorKind::Symbolic { intervals, .. } => {
                            intervals.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect()
                        }
                        GeneratorKind::QuadraticSurd { .. } => Vec::new(),
                    },
                })
                .collect(),
            polytope: match &self.polytope {
                PolytopeSpec::Box { lower, upper } => PolytopeJson::Box {
                    lower: encode_vec(lower),
                    upper: encode_vec(upper),
                },
                PolytopeSpec::Vertices(vs) => PolytopeJson::Vertices(vs.iter().map(|v| encode_vec(v)).collect()),
                PolytopeSpec::Facets(fs) => PolytopeJson::Facets(
                    fs.iter()
                        .map(|f| FacetJson {
                            normal: encode_vec(&f.normal),
                            offset: encode(&f.offset),
                        })
                        .collect(),
                ),
            },
            probe: self.probe.as_ref().map(|h| h.as_slice().to_vec()),
            translations: self.translations.as_ref().map(|t| match t {
                TranslationSpec::Cosets(cs) => TranslationsJson::Cosets(
                    cs.iter()
                        .map(|c| CosetJson {
                            basis: basis(&c.lattice),
                            translation: encode_vec(&c.translation),
                            weight: c.weight,
                        })
                        .collect(),
                ),
                TranslationSpec::Window(w) => TranslationsJson::Window(
                    w.points
                        .iter()
                        .map(|(p, m)| WindowPointJson {
                            point: encode_vec(p),
                            weight: *m,
                        })
                        .collect(),
                ),
            }),
            family: self.family.as_ref().map(|f| FamilyJson {
                basis: basis(f.lattice()),
                offsets: f.offsets().iter().map(|o| encode_vec(o)).collect(),
            }),
            split: self.split.as_ref().map(|(a, b)| SplitJson {
                first: a.iter().map(|i| i + 1).collect(),
                second: b.iter().map(|i| i + 1).collect(),
            }),
            refinement: self.refinement.as_ref().map(|r| RefinementJson {
                basis: basis(&r.lattice),
                t1: encode_vec(&r.t1),
                t2: encode_vec(&r.t2),
                weights: [r.weights.0, r.weights.1],
            }),
            weyl: self.weyl.as_ref().map(|w| WeylJson {
                a: encode_vec(&w.a),
                eps: w.eps.to_string(),
                jmax: w.jmax,
            }),
            render: self.render.as_ref().map(|r| RenderJson {
                window: BoxJson {
                    lower: encode_vec(&r.lower),
                    upper: encode_vec(&r.upper),
                },
                palette: r.palette.clone(),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.encode()).expect("problem files serialize")
    }

    pub fn polytope(&self) -> Result<Polytope> {
        self.polytope.build()
    }

    pub fn probe_for(&self, p: &Polytope) -> Result<ProbeDirection> {
        match &self.probe {
            Some(h) => Ok(h.clone()),
            None => p.find_probe_direction(),
        }
    }

    pub fn cosets(&self) -> Result<&[Coset]> {
        match &self.translations {
            Some(TranslationSpec::Cosets(cs)) => Ok(cs),
            Some(TranslationSpec::Window(_)) => Err(Error::ModeUnavailable(
                "this command needs periodic translations, not a finite window".into(),
            )),
            None => Err(Error::InvalidInput("the problem has no translations".into())),
        }
    }

    /// The synthesis family: the explicit section, else the translation cosets
    /// when they share one lattice.
    pub fn family(&self) -> Result<CosetFamily> {
        if let Some(f) = &self.family {
            return Ok(f.clone());
        }
        let cs = self.cosets()?;
        let lat = cs[0].lattice.clone();
        for c in cs {
            if !c.lattice.same_lattice(&lat)? {
                return Err(Error::InvalidInput(
                    "the cosets use different lattices; give a family section".into(),
                ));
            }
        }
        CosetFamily::new(lat, cs.iter().map(|c| c.translation.clone()).collect())
    }
}

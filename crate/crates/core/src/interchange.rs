//! JSON interchange documents: spaces, maps, complexes, structures, contractions,
//! morphisms and bar maps, all referenced by label.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ainfty::{AInfinityMorphism, AInfinityStructure};
use crate::bar::{BarContext, BarMap};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::map::{GradedMap, SparseVec};
use crate::multilinear::Powers;
use crate::perturbation::{Contraction, SdrDatum, TransferResult};
use crate::scalar::Field;
use crate::space::{BasisElement, Bidegree, BigradedSpace, Space};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

impl FieldSpec {
    pub fn of(field: Field) -> FieldSpec {
        match field {
            Field::Rational => FieldSpec::Named("Q".into()),
            Field::Prime(q) => FieldSpec::Prime { fp: q },
        }
    }

    pub fn field(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(Field::Rational),
            FieldSpec::Named(s) => Err(Error::InvalidField(format!("unknown field `{s}`"))),
            FieldSpec::Prime { fp } => Field::prime(*fp),
        }
    }
}

/// Parses the command-line spelling `Q` or `Fp:q`.
pub fn parse_field(text: &str) -> Result<Field> {
    match text.strip_prefix("Fp:") {
        Some(q) => Field::prime(q.parse().map_err(|_| Error::InvalidField(text.into()))?),
        None if text == "Q" => Ok(Field::Rational),
        None => Err(Error::InvalidField(text.into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySpec {
    pub from: String,
    pub to: String,
    pub coeff: String,
}

fn one() -> usize {
    1
}

fn is_one(n: &usize) -> bool {
    *n == 1
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A map from the `arity`-th tensor power of `source` to the `target_arity`-th
/// power of `target`, of suspensions when `suspended` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub source: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub arity: usize,
    pub target: String,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub target_arity: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    pub suspended: bool,
    pub bidegree: [i64; 2],
    pub entries: Vec<EntrySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub space: String,
    pub d: String,
}

/// `operations[n-1]` is the label of `m_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSpec {
    pub complex: String,
    pub arity: usize,
    pub operations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSpec {
    pub small: String,
    pub big: String,
    pub alpha: String,
    pub r: String,
    pub h: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    pub source: String,
    pub target: String,
    pub components: Vec<String>,
}

/// Blocks keyed `"j->k"`, each a suspended map label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarMapSpec {
    pub source: String,
    pub target: String,
    pub arity: usize,
    pub degree: i64,
    pub blocks: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub element: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorSpec {
    pub space: String,
    pub terms: Vec<TermSpec>,
}

macro_rules! section {
    ($t:ty) => {
        BTreeMap<String, $t>
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub field: FieldSpec,
    #[serde(default)]
    pub spaces: section!(Vec<BasisElement>),
    #[serde(default)]
    pub maps: section!(MapSpec),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: section!(ComplexSpec),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub structures: section!(StructureSpec),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub contractions: section!(ContractionSpec),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: section!(MorphismSpec),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bar_maps: section!(BarMapSpec),
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub distinguished: section!(VectorSpec),
}

fn format_error(what: &str, label: &str, e: impl std::fmt::Display) -> Error {
    Error::Format(format!("{what} `{label}`: {e}"))
}

impl Document {
    pub fn new(field: Field) -> Document {
        Document {
            field: FieldSpec::of(field),
            spaces: BTreeMap::new(),
            maps: BTreeMap::new(),
            complexes: BTreeMap::new(),
            structures: BTreeMap::new(),
            contractions: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            bar_maps: BTreeMap::new(),
            distinguished: BTreeMap::new(),
        }
    }

    /// Parse errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Document> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn field(&self) -> Result<Field> {
        self.field.field()
    }

    pub fn add_space(&mut self, label: &str, space: &Space) {
        self.spaces.insert(label.into(), space.basis());
    }

    /// Records `m`, whose source and target are powers of the named spaces (or of
    /// their suspensions).
    pub fn add_map(&mut self, label: &str, m: &GradedMap, source: &str, target: &str, suspended: bool) {
        let entries = m
            .entries()
            .map(|(j, i, c)| EntrySpec {
                from: m.source().label(j),
                to: m.target().label(i),
                coeff: c.to_string(),
            })
            .collect();
        let Bidegree(r, s) = m.bidegree();
        self.maps.insert(
            label.into(),
            MapSpec {
                source: source.into(),
                arity: m.source().arity(),
                target: target.into(),
                target_arity: m.target().arity(),
                suspended,
                bidegree: [r, s],
                entries,
            },
        );
    }

    /// Adds the complex, its space (same label) and its differential `label.d`.
    pub fn add_complex(&mut self, label: &str, c: &Complex) {
        self.add_space(label, c.space());
        let d = format!("{label}.d");
        self.add_map(&d, c.d(), label, label, false);
        self.complexes.insert(label.into(), ComplexSpec { space: label.into(), d });
    }

    /// Adds the structure on complex `complex` (added if missing), operations `label.m<n>`.
    pub fn add_structure(&mut self, label: &str, complex: &str, a: &AInfinityStructure) {
        if !self.complexes.contains_key(complex) {
            self.add_complex(complex, a.complex());
        }
        let mut operations = vec![self.complexes[complex].d.clone()];
        for n in 2..=a.arity() {
            let name = format!("{label}.m{n}");
            self.add_map(&name, a.m(n), complex, complex, false);
            operations.push(name);
        }
        self.structures.insert(
            label.into(),
            StructureSpec {
                complex: complex.into(),
                arity: a.arity(),
                operations,
            },
        );
    }

    pub fn add_contraction(&mut self, label: &str, small: &str, big: &str, datum: &SdrDatum) {
        for (name, c) in [(small, &datum.small), (big, &datum.big)] {
            if !self.complexes.contains_key(name) {
                self.add_complex(name, c);
            }
        }
        let names = [format!("{label}.alpha"), format!("{label}.r"), format!("{label}.h")];
        self.add_map(&names[0], &datum.alpha, small, big, false);
        self.add_map(&names[1], &datum.r, big, small, false);
        self.add_map(&names[2], &datum.h, big, big, false);
        let [alpha, r, h] = names;
        self.contractions.insert(
            label.into(),
            ContractionSpec {
                small: small.into(),
                big: big.into(),
                alpha,
                r,
                h,
            },
        );
    }

    pub fn add_morphism(&mut self, label: &str, source: &str, target: &str, f: &AInfinityMorphism) {
        let (sc, tc) = (self.structures[source].complex.clone(), self.structures[target].complex.clone());
        let components = f
            .components()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let name = format!("{label}.f{}", i + 1);
                self.add_map(&name, m, &sc, &tc, false);
                name
            })
            .collect();
        self.morphisms.insert(
            label.into(),
            MorphismSpec {
                source: source.into(),
                target: target.into(),
                components,
            },
        );
    }

    /// Bar maps between the bar constructions of two recorded complexes.
    pub fn add_bar_map(&mut self, label: &str, source: &str, target: &str, f: &BarMap) {
        let mut blocks = BTreeMap::new();
        for ((j, k), m) in f.blocks() {
            let name = format!("{label}.{j}->{k}");
            self.add_map(&name, m, source, target, true);
            blocks.insert(format!("{j}->{k}"), name);
        }
        self.bar_maps.insert(
            label.into(),
            BarMapSpec {
                source: source.into(),
                target: target.into(),
                arity: f.arity(),
                degree: f.degree(),
                blocks,
            },
        );
    }

    pub fn add_vector(&mut self, label: &str, space: &str, v: &[(usize, crate::scalar::Scalar)]) {
        let s = &self.spaces[space];
        let terms = v
            .iter()
            .map(|(i, c)| TermSpec {
                element: s[*i].name.clone(),
                coeff: c.to_string(),
            })
            .collect();
        self.distinguished.insert(
            label.into(),
            VectorSpec {
                space: space.into(),
                terms,
            },
        );
    }

    pub fn reader(&self) -> Result<Reader<'_>> {
        Ok(Reader {
            doc: self,
            field: self.field()?,
            spaces: HashMap::new(),
            powers: HashMap::new(),
            contexts: HashMap::new(),
        })
    }
}

/// Resolves labels into values, sharing spaces and bar contexts between lookups.
pub struct Reader<'a> {
    doc: &'a Document,
    field: Field,
    spaces: HashMap<String, Space>,
    powers: HashMap<(String, bool), Powers>,
    contexts: HashMap<(String, usize), Arc<BarContext>>,
}

impl Reader<'_> {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn document(&self) -> &Document {
        self.doc
    }

    pub fn space(&mut self, label: &str) -> Result<Space> {
        if let Some(s) = self.spaces.get(label) {
            return Ok(s.clone());
        }
        let basis = self.doc.spaces.get(label).ok_or_else(|| Error::Format(format!("no space `{label}`")))?;
        let s = BigradedSpace::new(self.field, basis.clone()).map_err(|e| format_error("space", label, e))?;
        self.spaces.insert(label.into(), s.clone());
        Ok(s)
    }

    fn power(&mut self, label: &str, arity: usize, suspended: bool) -> Result<Space> {
        if arity == 0 {
            return Err(Error::Format(format!("arity 0 for `{label}`")));
        }
        let key = (label.to_string(), suspended);
        let needs = self.powers.get(&key).is_none_or(|p| p.max() < arity);
        if needs {
            let base = self.space(label)?;
            let base = if suspended { BigradedSpace::suspension(&base) } else { base };
            self.powers.insert(key.clone(), Powers::new(&base, arity));
        }
        Ok(self.powers[&key].get(arity).clone())
    }

    pub fn map(&mut self, label: &str) -> Result<GradedMap> {
        let spec = self.doc.maps.get(label).ok_or_else(|| Error::Format(format!("no map `{label}`")))?.clone();
        let source = self.power(&spec.source, spec.arity, spec.suspended)?;
        let target = self.power(&spec.target, spec.target_arity, spec.suspended)?;
        let mut entries = Vec::with_capacity(spec.entries.len());
        for e in &spec.entries {
            let from = source
                .index_of(&e.from)
                .ok_or_else(|| format_error("map", label, format!("unknown source element `{}`", e.from)))?;
            let to = target
                .index_of(&e.to)
                .ok_or_else(|| format_error("map", label, format!("unknown target element `{}`", e.to)))?;
            let c = self.field.parse(&e.coeff).map_err(|err| format_error("map", label, err))?;
            entries.push((from, to, c));
        }
        let bidegree = Bidegree(spec.bidegree[0], spec.bidegree[1]);
        GradedMap::from_entries(&source, &target, bidegree, entries).map_err(|e| format_error("map", label, e))
    }

    /// The complex, checked for `d∘d = 0` and weight preservation.
    pub fn complex(&mut self, label: &str) -> Result<Complex> {
        let spec = self.doc.complexes.get(label).ok_or_else(|| Error::Format(format!("no complex `{label}`")))?.clone();
        let space = self.space(&spec.space)?;
        let d = self.map(&spec.d)?;
        if d.source() != &space || d.target() != &space {
            return Err(format_error("complex", label, "differential runs between the wrong spaces"));
        }
        Complex::new(d)
    }

    /// The complex with `d` read without the `d∘d = 0` check.
    pub fn raw_differential(&mut self, label: &str) -> Result<GradedMap> {
        let spec = self.doc.complexes.get(label).ok_or_else(|| Error::Format(format!("no complex `{label}`")))?.clone();
        self.map(&spec.d)
    }

    pub fn structure_spec(&self, label: &str) -> Result<&StructureSpec> {
        self.doc.structures.get(label).ok_or_else(|| Error::Format(format!("no structure `{label}`")))
    }

    /// Raw operations, `ops[n-1] = m_n`, without validity checks beyond shapes.
    pub fn operations(&mut self, label: &str) -> Result<(Complex, Vec<GradedMap>)> {
        let spec = self.structure_spec(label)?.clone();
        let complex = self.complex(&spec.complex)?;
        let ops = spec.operations.iter().map(|m| self.map(m)).collect::<Result<Vec<_>>>()?;
        Ok((complex, ops))
    }

    /// The structure truncated to `arity` (at most the stored arity).
    pub fn structure(&mut self, label: &str, arity: Option<usize>) -> Result<AInfinityStructure> {
        let stored = self.structure_spec(label)?.arity;
        let n = arity.unwrap_or(stored);
        if n > stored || n == 0 {
            return Err(Error::Format(format!("structure `{label}` is stored through arity {stored}, not {n}")));
        }
        let (complex, ops) = self.operations(label)?;
        let ops: Vec<GradedMap> = ops.into_iter().take(n).collect();
        AInfinityStructure::new(&complex, n, &ops).map_err(|e| format_error("structure", label, e))
    }

    /// The SDR datum; identities are not checked here.
    pub fn sdr(&mut self, label: &str) -> Result<SdrDatum> {
        let spec = self.doc.contractions.get(label).ok_or_else(|| Error::Format(format!("no contraction `{label}`")))?.clone();
        let small = self.complex(&spec.small)?;
        let big = self.complex(&spec.big)?;
        let (alpha, r, h) = (self.map(&spec.alpha)?, self.map(&spec.r)?, self.map(&spec.h)?);
        SdrDatum::new(&small, &big, &alpha, &r, &h).map_err(|e| format_error("contraction", label, e))
    }

    pub fn contraction(&mut self, label: &str) -> Result<Contraction> {
        Contraction::new(self.sdr(label)?)
    }

    pub fn context(&mut self, complex: &str, arity: usize) -> Result<Arc<BarContext>> {
        let key = (complex.to_string(), arity);
        if let Some(c) = self.contexts.get(&key) {
            return Ok(c.clone());
        }
        let c = BarContext::new(&self.complex(complex)?, arity)?;
        self.contexts.insert(key, c.clone());
        Ok(c)
    }

    pub fn bar_map(&mut self, label: &str) -> Result<BarMap> {
        let spec = self.doc.bar_maps.get(label).ok_or_else(|| Error::Format(format!("no bar map `{label}`")))?.clone();
        let source = self.context(&spec.source, spec.arity)?;
        let target = self.context(&spec.target, spec.arity)?;
        let mut blocks = Vec::new();
        for (key, m) in &spec.blocks {
            let (j, k) = key
                .split_once("->")
                .and_then(|(j, k)| Some((j.trim().parse().ok()?, k.trim().parse().ok()?)))
                .ok_or_else(|| format_error("bar map", label, format!("bad block key `{key}`")))?;
            blocks.push(((j, k), self.map(m)?));
        }
        BarMap::from_blocks(&source, &target, spec.degree, blocks).map_err(|e| format_error("bar map", label, e))
    }

    pub fn vector(&mut self, label: &str) -> Result<(Space, SparseVec)> {
        let spec = self.doc.distinguished.get(label).ok_or_else(|| Error::Format(format!("no vector `{label}`")))?.clone();
        let space = self.space(&spec.space)?;
        let mut v = Vec::new();
        for t in &spec.terms {
            let i = space
                .index_of(&t.element)
                .ok_or_else(|| format_error("vector", label, format!("unknown element `{}`", t.element)))?;
            v.push((i, self.field.parse(&t.coeff)?));
        }
        Ok((space, crate::map::normalize(v)))
    }
}

/// The transferred structure, both morphisms and the bar homotopy, with `C` and
/// `D` recorded as `small` and `big`.
pub fn transfer_document(res: &TransferResult, c: &Contraction) -> Document {
    let mut doc = Document::new(c.big().space().field());
    doc.add_contraction("contraction", "small", "big", c.datum());
    doc.add_structure("transferred", "small", &res.structure);
    doc.add_structure("input", "big", res.alpha.target());
    doc.add_morphism("alpha_inf", "transferred", "input", &res.alpha);
    doc.add_morphism("r_inf", "input", "transferred", &res.r);
    doc.add_bar_map("homotopy_inf", "big", "big", &res.homotopy_bar);
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{cochain_dga, gaussian_contraction, SimplicialComplexDescription};

    #[test]
    fn field_spellings() {
        let q: Document = serde_json::from_str(r#"{"field":"Q"}"#).unwrap();
        assert_eq!(q.field().unwrap(), Field::Rational);
        let p: Document = serde_json::from_str(r#"{"field":{"Fp":7}}"#).unwrap();
        assert_eq!(p.field().unwrap(), Field::Prime(7));
        let bad: Document = serde_json::from_str(r#"{"field":{"Fp":8}}"#).unwrap();
        assert!(bad.field().is_err());
        assert_eq!(parse_field("Fp:5").unwrap(), Field::Prime(5));
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn circle_round_trip() {
        let f = Field::Rational;
        let (d, mu) = cochain_dga(&SimplicialComplexDescription::circle(), f).unwrap();
        let a = AInfinityStructure::from_dga(&d, &mu, 3).unwrap();
        let c = gaussian_contraction(&d).unwrap();
        let mut doc = Document::new(f);
        doc.add_structure("circle", "D", &a);
        doc.add_contraction("c", "C", "D", c.datum());
        let text = doc.to_json();
        let back = Document::from_json(&text).unwrap();
        assert_eq!(back, doc);
        let mut r = back.reader().unwrap();
        let a2 = r.structure("circle", None).unwrap();
        assert_eq!(a2.m(2), a.m(2));
        assert_eq!(r.contraction("c").unwrap().h(), c.h());
        assert!(r.structure("circle", Some(4)).is_err());
    }

    #[test]
    fn parse_error_has_location() {
        let err = Document::from_json("{\"field\": \"Q\",\n \"spaces\": [}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}

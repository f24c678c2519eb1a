//! Text format for every domain value: JSON documents whose scalars are
//! exact strings such as `"1/2-3*i"`.
//!
//! A document is `{"version", "kind", "payload"}`. Unknown fields are
//! rejected everywhere, and `print(parse(t)) == t` for any text produced
//! by [`print`].

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{canonical_subspace, FinAbGroup, GMatrix, GaussScalar, Subspace};
use crate::ext::LieExtension;
use crate::fhs::FormalHodge;
use crate::mhs::MixedHodge;
use crate::sharp::{DeRhamTower, PuncturedCurve, SharpData};
use crate::vecn::VecTower;

pub const FORMAT_VERSION: &str = "fhs/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mhs,
    Tower,
    Fhs,
    Dr,
    Lie,
    Subspace,
    Result,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Mhs => "mhs",
            Kind::Tower => "tower",
            Kind::Fhs => "fhs",
            Kind::Dr => "dr",
            Kind::Lie => "lie",
            Kind::Subspace => "subspace",
            Kind::Result => "result",
        };
        f.write_str(s)
    }
}

/// Ingested de Rham data over a mixed Hodge structure. `connecting` is
/// present for punctured curves, where it cuts out `H^o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrRecord {
    pub h: MixedHodge,
    pub dr: DeRhamTower,
    pub n: usize,
    pub connecting: Option<GMatrix>,
}

impl DrRecord {
    pub fn k(&self) -> usize {
        self.dr.k()
    }

    pub fn sharp(&self) -> SharpData {
        SharpData {
            h: self.h.clone(),
            dr: self.dr.clone(),
            n: self.n,
        }
    }

    pub fn curve(&self) -> Option<PuncturedCurve> {
        self.connecting.as_ref().map(|c| PuncturedCurve {
            h: self.h.clone(),
            dr: self.dr.clone(),
            connecting: c.clone(),
        })
    }
}

/// A stored command report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub verb: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Mhs(MixedHodge),
    Tower(VecTower),
    Fhs(FormalHodge),
    Dr(DrRecord),
    Lie(LieExtension),
    Subspace(Subspace),
    Result(Report),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Mhs(_) => Kind::Mhs,
            Payload::Tower(_) => Kind::Tower,
            Payload::Fhs(_) => Kind::Fhs,
            Payload::Dr(_) => Kind::Dr,
            Payload::Lie(_) => Kind::Lie,
            Payload::Subspace(_) => Kind::Subspace,
            Payload::Result(_) => Kind::Result,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub version: String,
    pub payload: Payload,
}

impl Document {
    pub fn new(payload: Payload) -> Self {
        Document {
            version: FORMAT_VERSION.to_string(),
            payload,
        }
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }
}

// ---- wire types ----

#[derive(Clone, Debug)]
struct Scalar(GaussScalar);

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GaussScalar::from_str(&s).map(Scalar).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl From<&GMatrix> for Mat {
    fn from(m: &GMatrix) -> Self {
        Mat {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().cloned().map(Scalar).collect(),
        }
    }
}

impl Mat {
    fn build(self, what: &str) -> Result<GMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "{what}: {} entries for a {}x{} matrix",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        let cols = self.cols;
        let mut it = self.data.into_iter().map(|s| s.0);
        Ok(GMatrix::from_fn(self.rows, cols, |_, _| it.next().expect("length checked")))
    }
}

fn mats(ms: &[GMatrix]) -> Vec<Mat> {
    ms.iter().map(Mat::from).collect()
}

fn build_all(ms: Vec<Mat>, what: &str) -> Result<Vec<GMatrix>> {
    ms.into_iter()
        .enumerate()
        .map(|(i, m)| m.build(&format!("{what}[{i}]")))
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightEntry {
    m: i64,
    basis: Mat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HodgeEntry {
    p: i64,
    basis: Mat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MhsWire {
    rank: usize,
    torsion: Vec<u64>,
    weights: Vec<WeightEntry>,
    hodge: Vec<HodgeEntry>,
}

impl From<&MixedHodge> for MhsWire {
    fn from(h: &MixedHodge) -> Self {
        MhsWire {
            rank: h.lattice().rank,
            torsion: h.lattice().torsion.clone(),
            weights: h
                .weight_entries()
                .into_iter()
                .map(|(m, s)| WeightEntry { m, basis: Mat::from(s.basis()) })
                .collect(),
            hodge: h
                .hodge_entries()
                .into_iter()
                .map(|(p, s)| HodgeEntry { p, basis: Mat::from(s.basis()) })
                .collect(),
        }
    }
}

impl MhsWire {
    fn build(self) -> Result<MixedHodge> {
        let lattice = FinAbGroup::new(self.rank, self.torsion)?;
        let weights = self
            .weights
            .into_iter()
            .map(|e| Ok((e.m, e.basis.build(&format!("mhs.weights[m={}]", e.m))?)))
            .collect::<Result<Vec<_>>>()?;
        let hodge = self
            .hodge
            .into_iter()
            .map(|e| Ok((e.p, e.basis.build(&format!("mhs.hodge[p={}]", e.p))?)))
            .collect::<Result<Vec<_>>>()?;
        MixedHodge::new(lattice, weights, hodge)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerWire {
    n: usize,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

impl From<&VecTower> for TowerWire {
    fn from(t: &VecTower) -> Self {
        TowerWire {
            n: t.n(),
            dims: t.dims().to_vec(),
            maps: mats(t.maps()),
        }
    }
}

impl TowerWire {
    fn build(self) -> Result<VecTower> {
        if self.dims.len() != self.n {
            return Err(Error::Parse(format!("tower: n = {} but {} dims", self.n, self.dims.len())));
        }
        VecTower::new(self.dims, build_all(self.maps, "tower.maps")?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FhsWire {
    level: usize,
    twist: i64,
    mhs: MhsWire,
    ho_dim: usize,
    tower: TowerWire,
    pi: Vec<Mat>,
    aug_et: Mat,
    aug_o: Mat,
}

impl From<&FormalHodge> for FhsWire {
    fn from(x: &FormalHodge) -> Self {
        FhsWire {
            level: x.n,
            twist: x.twist,
            mhs: MhsWire::from(&x.h_et),
            ho_dim: x.ho_dim,
            tower: TowerWire::from(&x.tower),
            pi: mats(&x.pi),
            aug_et: Mat::from(&x.aug_et),
            aug_o: Mat::from(&x.aug_o),
        }
    }
}

impl FhsWire {
    fn build(self) -> Result<FormalHodge> {
        Ok(FormalHodge {
            n: self.level,
            twist: self.twist,
            h_et: self.mhs.build()?,
            ho_dim: self.ho_dim,
            tower: self.tower.build()?,
            pi: build_all(self.pi, "pi")?,
            aug_et: self.aug_et.build("aug_et")?,
            aug_o: self.aug_o.build("aug_o")?,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrWire {
    mhs: MhsWire,
    n: usize,
    k: usize,
    tower: TowerWire,
    rho: Vec<Mat>,
    aug: Mat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connecting: Option<Mat>,
}

impl From<&DrRecord> for DrWire {
    fn from(r: &DrRecord) -> Self {
        DrWire {
            mhs: MhsWire::from(&r.h),
            n: r.n,
            k: r.k(),
            tower: TowerWire::from(&r.dr.tower),
            rho: mats(&r.dr.rho),
            aug: Mat::from(&r.dr.aug),
            connecting: r.connecting.as_ref().map(Mat::from),
        }
    }
}

impl DrWire {
    fn build(self) -> Result<DrRecord> {
        if self.k != self.tower.n {
            return Err(Error::Parse(format!("dr: k = {} but the tower has {} spaces", self.k, self.tower.n)));
        }
        Ok(DrRecord {
            h: self.mhs.build()?,
            dr: DeRhamTower {
                tower: self.tower.build()?,
                rho: build_all(self.rho, "rho")?,
                aug: self.aug.build("aug")?,
            },
            n: self.n,
            connecting: self.connecting.map(|m| m.build("connecting")).transpose()?,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieWire {
    ambient: usize,
    sub: Mat,
    lattice: Mat,
}

impl From<&LieExtension> for LieWire {
    fn from(e: &LieExtension) -> Self {
        LieWire {
            ambient: e.ambient,
            sub: Mat::from(e.sub_space.basis()),
            lattice: Mat::from(&e.lattice),
        }
    }
}

impl LieWire {
    fn build(self) -> Result<LieExtension> {
        let sub = subspace_in(self.ambient, self.sub.build("sub")?)?;
        LieExtension::new(sub, self.lattice.build("lattice")?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceWire {
    ambient: usize,
    basis: Mat,
}

fn subspace_in(ambient: usize, basis: GMatrix) -> Result<Subspace> {
    if basis.rows() != ambient {
        return Err(Error::Dimension(format!("basis vectors have {} entries, ambient is {ambient}", basis.rows())));
    }
    Ok(canonical_subspace(&basis))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<T> {
    version: String,
    kind: Kind,
    payload: T,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    version: String,
    kind: Kind,
    #[allow(dead_code)]
    payload: de::IgnoredAny,
}

fn decode<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!("line {}, column {}, at {path}: {inner}", inner.line(), inner.column()))
    })?;
    de.end().map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    Ok(v)
}

/// Reads a document, checking the version before the payload schema.
pub fn parse(text: &str) -> Result<Document> {
    let header: Header = decode(text)?;
    if header.version != FORMAT_VERSION {
        return Err(Error::Version {
            found: header.version,
            expected: FORMAT_VERSION.into(),
        });
    }
    let payload = match header.kind {
        Kind::Mhs => Payload::Mhs(decode::<Envelope<MhsWire>>(text)?.payload.build()?),
        Kind::Tower => Payload::Tower(decode::<Envelope<TowerWire>>(text)?.payload.build()?),
        Kind::Fhs => Payload::Fhs(decode::<Envelope<FhsWire>>(text)?.payload.build()?),
        Kind::Dr => Payload::Dr(decode::<Envelope<DrWire>>(text)?.payload.build()?),
        Kind::Lie => Payload::Lie(decode::<Envelope<LieWire>>(text)?.payload.build()?),
        Kind::Subspace => {
            let w = decode::<Envelope<SubspaceWire>>(text)?.payload;
            Payload::Subspace(subspace_in(w.ambient, w.basis.build("basis")?)?)
        }
        Kind::Result => Payload::Result(decode::<Envelope<Report>>(text)?.payload),
    };
    Ok(Document {
        version: header.version,
        payload,
    })
}

fn envelope<T: Serialize>(version: &str, kind: Kind, payload: T) -> String {
    let env = Envelope {
        version: version.to_string(),
        kind,
        payload,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("wire types always serialize");
    s.push('\n');
    s
}

/// Canonical text of a document: pretty JSON with a trailing newline.
pub fn print(doc: &Document) -> String {
    let (v, k) = (doc.version.as_str(), doc.kind());
    match &doc.payload {
        Payload::Mhs(h) => envelope(v, k, MhsWire::from(h)),
        Payload::Tower(t) => envelope(v, k, TowerWire::from(t)),
        Payload::Fhs(x) => envelope(v, k, FhsWire::from(x)),
        Payload::Dr(r) => envelope(v, k, DrWire::from(r)),
        Payload::Lie(e) => envelope(v, k, LieWire::from(e)),
        Payload::Subspace(s) => envelope(
            v,
            k,
            SubspaceWire {
                ambient: s.ambient_dim(),
                basis: Mat::from(s.basis()),
            },
        ),
        Payload::Result(r) => envelope(v, k, r.clone()),
    }
}

/// Prints a bare payload under the current version.
pub fn print_payload(p: Payload) -> String {
    print(&Document::new(p))
}

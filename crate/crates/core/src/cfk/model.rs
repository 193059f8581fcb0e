use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub alexander: i64,
    pub maslov: i64,
}

/// A differential component `from → U^u_power · to`. Endpoints are generator indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub u_power: u32,
}

/// Identification of the `j = 0` column with the `i = 0` column.
///
/// As a matrix, column `x` is the image of generator `x`; rows index the `B` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flip {
    /// `map[x]` is the partner of generator `x`.
    Involution(Vec<usize>),
    Explicit(BitMatrix),
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfkModel {
    name: String,
    generators: Vec<Generator>,
    arrows: Vec<Arrow>,
    flip: Flip,
}

impl CfkModel {
    /// Builds and validates a model. Arrows may be given in any order.
    pub fn new(name: impl Into<String>, generators: Vec<Generator>, arrows: Vec<Arrow>, flip: Flip) -> Result<Self> {
        let model = Self::assemble(name.into(), generators, arrows, flip);
        model.validate()?;
        Ok(model)
    }

    pub(crate) fn assemble(name: String, generators: Vec<Generator>, mut arrows: Vec<Arrow>, flip: Flip) -> Self {
        arrows.sort();
        Self { name, generators, arrows, flip }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn flip(&self) -> &Flip {
        &self.flip
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    pub fn alexander(&self, x: usize) -> i64 {
        self.generators[x].alexander
    }

    /// Vertical drop `b` of an arrow, derived from the Alexander gradings.
    pub fn vertical_drop(&self, arrow: &Arrow) -> i64 {
        self.alexander(arrow.from) - self.alexander(arrow.to) + arrow.u_power as i64
    }

    /// `(a, b)` drops of an arrow.
    pub fn drops(&self, arrow: &Arrow) -> (i64, i64) {
        (arrow.u_power as i64, self.vertical_drop(arrow))
    }

    pub fn flip_matrix(&self) -> BitMatrix {
        let n = self.len();
        match &self.flip {
            Flip::Identity => BitMatrix::identity(n),
            Flip::Involution(map) => BitMatrix::from_fn(n, n, |i, j| map[j] == i),
            Flip::Explicit(m) => m.clone(),
        }
    }

    /// Matrix of the arrows with the given drop predicate, columns → rows.
    pub(crate) fn arrow_matrix(&self, keep: impl Fn((i64, i64)) -> bool) -> BitMatrix {
        let n = self.len();
        let mut m = BitMatrix::zeros(n, n);
        for a in &self.arrows {
            if keep(self.drops(a)) {
                m.toggle(a.to, a.from);
            }
        }
        m
    }

    fn describe(&self, a: &Arrow) -> String {
        let (u, b) = self.drops(a);
        format!("{}→{} (u_power {u}, vertical drop {b})", self.generators[a.from].id, self.generators[a.to].id)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g.id.as_str()) {
                return Err(Error::invariant("unique ids", format!("generator id {:?} repeated", g.id)));
            }
        }
        let n = self.len();
        for w in self.arrows.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Parse(format!("duplicate arrow {}", self.describe(&w[0]))));
            }
        }
        for a in &self.arrows {
            if a.from >= n || a.to >= n {
                return Err(Error::invariant("arrow endpoints", format!("arrow index out of range: {a:?}")));
            }
            if self.vertical_drop(a) < 0 {
                return Err(Error::invariant("vertical drop ≥ 0", self.describe(a)));
            }
            let (from, to) = (&self.generators[a.from], &self.generators[a.to]);
            if to.maslov != from.maslov - 1 + 2 * a.u_power as i64 {
                return Err(Error::invariant(
                    "Maslov constraint",
                    format!(
                        "{}: M({})={} but M({})−1+2a = {}",
                        self.describe(a),
                        to.id,
                        to.maslov,
                        from.id,
                        from.maslov - 1 + 2 * a.u_power as i64
                    ),
                ));
            }
        }
        self.check_d_squared()?;
        self.check_flip()
    }

    fn check_d_squared(&self) -> Result<()> {
        let mut out: HashMap<usize, Vec<&Arrow>> = HashMap::new();
        for a in &self.arrows {
            out.entry(a.from).or_default().push(a);
        }
        let mut paths: BTreeMap<(usize, usize, u32), usize> = BTreeMap::new();
        for a in &self.arrows {
            for b in out.get(&a.to).into_iter().flatten() {
                *paths.entry((a.from, b.to, a.u_power + b.u_power)).or_default() += 1;
            }
        }
        if let Some(((x, z, t), count)) = paths.into_iter().find(|(_, c)| c % 2 == 1) {
            return Err(Error::invariant(
                "d² = 0",
                format!(
                    "{count} two-arrow paths {}→·→{} with total u_power {t}",
                    self.generators[x].id, self.generators[z].id
                ),
            ));
        }
        Ok(())
    }

    fn check_flip(&self) -> Result<()> {
        let n = self.len();
        match &self.flip {
            Flip::Identity => Ok(()),
            Flip::Involution(map) => {
                if map.len() != n {
                    return Err(Error::invariant("flip involution", "map does not cover every generator"));
                }
                for x in 0..n {
                    let y = map[x];
                    if y >= n || map[y] != x {
                        return Err(Error::invariant(
                            "flip involution",
                            format!("map is not an involution at {}", self.generators[x].id),
                        ));
                    }
                    if self.alexander(y) != -self.alexander(x) {
                        return Err(Error::invariant(
                            "flip involution",
                            format!(
                                "A({}) = {} is not −A({}) = {}",
                                self.generators[y].id,
                                self.alexander(y),
                                self.generators[x].id,
                                -self.alexander(x)
                            ),
                        ));
                    }
                }
                let set: BTreeSet<Arrow> = self.arrows.iter().copied().collect();
                for a in &self.arrows {
                    let b = self.vertical_drop(a);
                    let image = Arrow { from: map[a.from], to: map[a.to], u_power: b as u32 };
                    if !set.contains(&image) {
                        return Err(Error::invariant(
                            "flip involution",
                            format!("arrow {} has no flipped partner with drops swapped", self.describe(a)),
                        ));
                    }
                }
                Ok(())
            }
            Flip::Explicit(f) => {
                if f.rows() != n || f.cols() != n {
                    return Err(Error::invariant(
                        "flip matrix",
                        format!("matrix is {}x{}, expected {n}x{n}", f.rows(), f.cols()),
                    ));
                }
                if !f.is_invertible() {
                    return Err(Error::invariant("flip matrix", "matrix is not invertible"));
                }
                for (i, j) in f.ones() {
                    if self.alexander(i) > -self.alexander(j) {
                        return Err(Error::invariant(
                            "flip matrix",
                            format!(
                                "entry {}←{} raises the filtration level",
                                self.generators[i].id, self.generators[j].id
                            ),
                        ));
                    }
                }
                let d_b = self.arrow_matrix(|(a, _)| a == 0);
                let d_h = self.arrow_matrix(|(_, b)| b == 0);
                if d_b.mul(f) != f.mul(&d_h) {
                    return Err(Error::invariant("flip matrix", "matrix is not a chain map from C{j=0} to B"));
                }
                Ok(())
            }
        }
    }

    /// Reverses every arrow and negates both gradings; each arrow keeps its `(a, b)` drops.
    pub fn mirror(&self) -> CfkModel {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator { id: g.id.clone(), alexander: -g.alexander, maslov: -g.maslov })
            .collect();
        let arrows = self.arrows.iter().map(|a| Arrow { from: a.to, to: a.from, u_power: a.u_power }).collect();
        let flip = match &self.flip {
            Flip::Explicit(f) => Flip::Explicit(f.inverse().expect("validated flip is invertible").transpose()),
            other => other.clone(),
        };
        CfkModel::assemble(self.name.clone(), generators, arrows, flip)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from(self)).expect("model serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    generators: Vec<Generator>,
    #[serde(default)]
    arrows: Vec<ArrowFile>,
    flip: FlipFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowFile {
    from: String,
    to: String,
    u_power: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FlipFile {
    Involution { map: BTreeMap<String, String> },
    Explicit { matrix: Vec<BitRow> },
    Identity,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BitRow {
    Text(String),
    Bits(Vec<u8>),
}

impl From<&CfkModel> for ModelFile {
    fn from(c: &CfkModel) -> Self {
        let id = |i: usize| c.generators[i].id.clone();
        let flip = match &c.flip {
            Flip::Identity => FlipFile::Identity,
            Flip::Involution(map) => {
                FlipFile::Involution { map: map.iter().enumerate().map(|(x, &y)| (id(x), id(y))).collect() }
            }
            Flip::Explicit(m) => {
                FlipFile::Explicit { matrix: m.to_string().lines().map(|l| BitRow::Text(l.to_string())).collect() }
            }
        };
        ModelFile {
            name: c.name.clone(),
            generators: c.generators.clone(),
            arrows: c
                .arrows
                .iter()
                .map(|a| ArrowFile { from: id(a.from), to: id(a.to), u_power: a.u_power as i64 })
                .collect(),
            flip,
        }
    }
}

/// Parses a model document and checks every model invariant.
pub fn parse_and_validate(text: &str) -> Result<CfkModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut index = HashMap::new();
    for (i, g) in file.generators.iter().enumerate() {
        if index.insert(g.id.clone(), i).is_some() {
            return Err(Error::invariant("unique ids", format!("generator id {:?} repeated", g.id)));
        }
    }
    let lookup = |id: &str| {
        index.get(id).copied().ok_or_else(|| Error::invariant("arrow endpoints", format!("unknown generator {id:?}")))
    };
    let mut arrows = Vec::with_capacity(file.arrows.len());
    for a in &file.arrows {
        if a.u_power < 0 {
            return Err(Error::invariant(
                "u_power ≥ 0",
                format!("arrow {}→{} has u_power {}", a.from, a.to, a.u_power),
            ));
        }
        let u_power = u32::try_from(a.u_power).map_err(|_| Error::Parse(format!("u_power {} too large", a.u_power)))?;
        arrows.push(Arrow { from: lookup(&a.from)?, to: lookup(&a.to)?, u_power });
    }
    let flip = match file.flip {
        FlipFile::Identity => Flip::Identity,
        FlipFile::Involution { map } => {
            let mut partner = vec![usize::MAX; file.generators.len()];
            for (x, y) in &map {
                let (xi, yi) = (lookup(x)?, lookup(y)?);
                partner[xi] = yi;
            }
            if let Some(x) = partner.iter().position(|&p| p == usize::MAX) {
                return Err(Error::invariant(
                    "flip involution",
                    format!("generator {} missing from flip map", file.generators[x].id),
                ));
            }
            Flip::Involution(partner)
        }
        FlipFile::Explicit { matrix } => {
            let rows: Vec<String> = matrix
                .into_iter()
                .map(|r| match r {
                    BitRow::Text(s) => s,
                    BitRow::Bits(b) => b.iter().map(|&x| if x == 0 { '0' } else { '1' }).collect(),
                })
                .collect();
            Flip::Explicit(BitMatrix::parse_rows(&rows)?)
        }
    };
    CfkModel::new(file.name, file.generators, arrows, flip)
}

/// Reads and validates a model file.
pub fn load_model(path: &std::path::Path) -> Result<CfkModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_and_validate(&text)
}

//! The spec-file schema. Every command reads one TOML document; each
//! command looks at its own tables and ignores the rest.
//!
//! ```toml
//! [groupoid]            # cohomology
//! kind = "infinite_cyclic"   # cyclic | dihedral | quaternion | finite_group | pair | action
//! [module]
//! fiber = "Z"                # sum of Z, Z^n, Z/d, Q, Q^n, Q/Z, (Q/Z)^n
//! action = "inversion"       # trivial | inversion | sign | matrices = [[["-1"]]]
//!
//! [lie_algebra]         # ce
//! name = "sl2"               # or basis = [...] and brackets = ["[e1, e2] = e3"]
//! [representation]
//! kind = "adjoint"           # trivial (dim) | adjoint | coadjoint | matrices
//!
//! [group]               # vanest, extend
//! builtin = "plane"          # plane | heisenberg | torus | affine | abelian, or explicit laws
//! [vanest]
//! form = "da^db"             # integrate; or cocycle + degree for differentiate/check
//!
//! [extension]           # extend
//! fiber = ["c"]
//! cocycles = ["a'*b"]
//!
//! [periods]             # periods
//! form = { kind = "sphere_area", k = 0.5 }
//! cycles = [{ shape = { kind = "sphere", center = [0.0, 0.0, 0.0], radius = 1.0, axes = [0, 1, 2] }, base = [0.0, 0.0, 0.0] }]
//! lattice = [1.0]
//!
//! [divisor]             # divisor
//! normalize = ["(2; 1; 1)"]
//! sections = ["x^1 * (1)"]
//! ```

use serde::Deserialize;

use crate::barcoh::{DiscreteGroupoidSpec, GroupoidModule};
use crate::cealg::{library, InfinitesimalModule, LieAlgebraData, RepresentationData};
use crate::exactalg::{Matrix, MixedModule, Rat, RatMatrix};
use crate::forms::{parse_poly, Chart};
use crate::vanest::CoordGroupSpec;

/// A spec-file problem with the line of the offending key when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub msg: String,
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{l}:{c}: {}", self.msg),
            (Some(l), None) => write!(f, "{l}: {}", self.msg),
            _ => write!(f, "{}", self.msg),
        }
    }
}

/// Spec-file text kept for locating keys in diagnostics.
pub struct Source<'a> {
    pub text: &'a str,
}

impl Source<'_> {
    pub fn error(&self, key: &str, msg: impl std::fmt::Display) -> SpecError {
        let line = self.text.lines().position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key).is_some_and(|rest| rest.trim_start().starts_with('='))
                || t.starts_with(&format!("[{key}]"))
        });
        SpecError { line: line.map(|l| l + 1), column: None, msg: format!("{key}: {msg}") }
    }
}

pub fn parse_document(text: &str) -> Result<SpecFile, SpecError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = match e.span() {
            Some(span) => {
                let before = &text[..span.start.min(text.len())];
                let line = before.matches('\n').count() + 1;
                let column = before.len() - before.rfind('\n').map_or(0, |k| k + 1) + 1;
                (Some(line), Some(column))
            }
            None => (None, None),
        };
        SpecError { line, column, msg: e.message().to_string() }
    })
}

/// An exact rational written as an integer or a string such as `"-3/4"`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn to_rat(&self) -> Result<Rat, String> {
        match self {
            Num::Int(v) => Ok(Rat::from_integer((*v).into())),
            Num::Text(s) => {
                let s = s.trim();
                let parsed = match s.split_once('/') {
                    Some((n, d)) => n.trim().parse().ok().zip(d.trim().parse().ok()),
                    None => s.parse().ok().map(|n| (n, 1.into())),
                };
                match parsed {
                    Some((n, d)) if d != num_bigint::BigInt::from(0) => Ok(Rat::new(n, d)),
                    _ => Err(format!("not a rational number: {s:?}")),
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub groupoid: Option<GroupoidSection>,
    pub module: Option<ModuleSection>,
    pub lie_algebra: Option<LieSection>,
    pub representation: Option<RepSection>,
    pub group: Option<GroupSection>,
    pub vanest: Option<VanEstSection>,
    pub extension: Option<ExtensionSection>,
    pub finite_extension: Option<FiniteExtensionSection>,
    pub periods: Option<PeriodsSection>,
    pub divisor: Option<DivisorSection>,
    pub options: Option<OptionsSection>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSection {
    pub degrees: Option<[usize; 2]>,
    pub truncated: Option<bool>,
    pub mesh: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidSection {
    pub kind: String,
    pub order: Option<usize>,
    pub objects: Option<usize>,
    pub table: Option<Vec<Vec<usize>>>,
    pub action: Option<Vec<Vec<usize>>>,
}

impl GroupoidSection {
    pub fn build(&self, src: &Source) -> Result<DiscreteGroupoidSpec, SpecError> {
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| src.error(key, "required for this kind"));
        Ok(match self.kind.as_str() {
            "infinite_cyclic" => DiscreteGroupoidSpec::InfiniteCyclic,
            "cyclic" => DiscreteGroupoidSpec::cyclic_group(need(self.order, "order")?),
            "dihedral" => DiscreteGroupoidSpec::dihedral_group(need(self.order, "order")?),
            "quaternion" => DiscreteGroupoidSpec::quaternion_group(),
            "finite_group" => DiscreteGroupoidSpec::FiniteGroup {
                table: self.table.clone().ok_or_else(|| src.error("table", "required for finite_group"))?,
            },
            "pair" => DiscreteGroupoidSpec::PairGroupoid { objects: need(self.objects, "objects")? },
            "action" => DiscreteGroupoidSpec::FiniteActionGroupoid {
                group_table: self.table.clone().ok_or_else(|| src.error("table", "required for action"))?,
                action: self.action.clone().ok_or_else(|| src.error("action", "required for action"))?,
            },
            other => return Err(src.error("kind", format!("unknown groupoid kind {other:?}"))),
        })
    }

    /// A group table for the finite kinds.
    pub fn table(&self, src: &Source) -> Result<Vec<Vec<usize>>, SpecError> {
        match self.build(src)? {
            DiscreteGroupoidSpec::FiniteGroup { table } => Ok(table),
            _ => Err(src.error("kind", "a finite group is required here")),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    Named(String),
    Matrices(Vec<Vec<Vec<Num>>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub fiber: String,
    #[serde(default = "default_action")]
    pub action: ActionSpec,
}

fn default_action() -> ActionSpec {
    ActionSpec::Named("trivial".into())
}

/// `Z^2 + Z/3 + Q + Q/Z` style fiber descriptions.
pub fn parse_fiber(text: &str) -> Result<MixedModule, String> {
    let mut parts = Vec::new();
    for term in text.split('+').map(str::trim) {
        let (body, power) = match term.rsplit_once('^') {
            Some((b, p)) => (b.trim(), p.trim().parse::<usize>().map_err(|_| format!("bad exponent in {term:?}"))?),
            None => (term, 1),
        };
        let body = body.trim_start_matches('(').trim_end_matches(')');
        let m = match body {
            "0" => MixedModule::trivial(),
            "Z" => MixedModule::lattice(power),
            "Q" => MixedModule::rational(power),
            "Q/Z" => MixedModule::torus(power),
            b => match b.strip_prefix("Z/").map(str::parse::<i64>) {
                Some(Ok(d)) if d >= 1 && power == 1 => MixedModule::cyclic(d),
                _ => return Err(format!("unknown fiber term {term:?}")),
            },
        };
        parts.push(m);
    }
    Ok(MixedModule::direct_sum(&parts).module)
}

fn rat_matrix(rows: &[Vec<Num>]) -> Result<RatMatrix, String> {
    let rows: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(Num::to_rat).collect()).collect::<Result<_, _>>()?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("matrix rows must be nonempty and of equal length".into());
    }
    Ok(Matrix::from_rows(rows))
}

impl ModuleSection {
    pub fn build(&self, groupoid: &DiscreteGroupoidSpec, src: &Source) -> Result<GroupoidModule, SpecError> {
        let fiber = parse_fiber(&self.fiber).map_err(|e| src.error("fiber", e))?;
        let dim = fiber.ambient_dim();
        let elements = match groupoid {
            DiscreteGroupoidSpec::InfiniteCyclic => 1,
            DiscreteGroupoidSpec::FiniteGroup { table } => table.len(),
            DiscreteGroupoidSpec::FiniteActionGroupoid { group_table, .. } => group_table.len(),
            DiscreteGroupoidSpec::PairGroupoid { .. } => 0,
        };
        let scalar = |v: i64| {
            let mut m = RatMatrix::identity(dim);
            for i in 0..dim {
                m[(i, i)] = Rat::from_integer(v.into());
            }
            m
        };
        let reps: Vec<RatMatrix> = match &self.action {
            ActionSpec::Named(n) if n == "trivial" => {
                return GroupoidModule::trivial(groupoid, &fiber).map_err(|e| src.error("module", e));
            }
            ActionSpec::Named(n) if n == "inversion" => match groupoid {
                DiscreteGroupoidSpec::InfiniteCyclic => vec![scalar(-1)],
                _ => return Err(src.error("action", "inversion needs the infinite cyclic group; use sign")),
            },
            // element g of a cyclic group acts by (-1)^g
            ActionSpec::Named(n) if n == "sign" => (0..elements).map(|g| scalar(if g % 2 == 0 { 1 } else { -1 })).collect(),
            ActionSpec::Named(n) => return Err(src.error("action", format!("unknown action {n:?}"))),
            ActionSpec::Matrices(ms) => {
                ms.iter().map(|m| rat_matrix(m)).collect::<Result<_, _>>().map_err(|e| src.error("action", e))?
            }
        };
        let module = match groupoid {
            DiscreteGroupoidSpec::InfiniteCyclic => {
                let [g] = reps.as_slice() else {
                    return Err(src.error("action", "the infinite cyclic group takes one generator matrix"));
                };
                GroupoidModule::cyclic_generator(&fiber, g.clone())
            }
            _ => GroupoidModule::from_group_action(groupoid, &fiber, &reps).map_err(|e| src.error("action", e))?,
        };
        module.validate(groupoid).map_err(|e| src.error("action", e))?;
        Ok(module)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSection {
    pub name: Option<String>,
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<String>,
}

impl LieSection {
    pub fn build(&self, src: &Source) -> Result<(Vec<String>, LieAlgebraData), SpecError> {
        if let Some(name) = &self.name {
            let (_, g) = library::all()
                .into_iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| src.error("name", format!("unknown Lie algebra {name:?}")))?;
            let basis = (1..=g.dim()).map(|i| format!("e{i}")).collect();
            return Ok((basis, g));
        }
        let basis = self.basis.clone().ok_or_else(|| src.error("lie_algebra", "name or basis is required"))?;
        let n = basis.len();
        let chart = Chart::new(basis.iter().cloned());
        let mut c = vec![vec![vec![Rat::from_integer(0.into()); n]; n]; n];
        for b in &self.brackets {
            let err = |m: String| src.error("brackets", format!("{b:?}: {m}"));
            let (lhs, rhs) = b.split_once('=').ok_or_else(|| err("expected [x, y] = ...".into()))?;
            let inner = lhs.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| err("expected [x, y]".into()))?;
            let (x, y) = inner.split_once(',').ok_or_else(|| err("expected [x, y]".into()))?;
            let i = chart.index_of(x.trim()).ok_or_else(|| err(format!("unknown basis element {x:?}")))?;
            let j = chart.index_of(y.trim()).ok_or_else(|| err(format!("unknown basis element {y:?}")))?;
            let p = parse_poly(rhs, &chart).map_err(|e| err(e.to_string()))?;
            for (e, coef) in p.terms() {
                let degree: i32 = e.iter().sum();
                let k = e.iter().position(|&v| v == 1).filter(|_| degree == 1 && e.iter().all(|&v| v >= 0));
                let k = k.ok_or_else(|| err("right side must be linear".into()))?;
                c[i][j][k] = coef.clone();
                c[j][i][k] = -coef.clone();
            }
        }
        let g = LieAlgebraData::new(n, c).map_err(|e| src.error("brackets", e))?;
        Ok((basis, g))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSection {
    pub kind: String,
    pub dim: Option<usize>,
    pub matrices: Option<Vec<Vec<Vec<Num>>>>,
    /// Rows spanning a lattice in the representation space.
    pub lattice: Option<Vec<Vec<Num>>>,
}

impl RepSection {
    pub fn build(&self, g: &LieAlgebraData, src: &Source) -> Result<(RepresentationData, Option<InfinitesimalModule>), SpecError> {
        let rep = match self.kind.as_str() {
            "trivial" => RepresentationData::trivial(g, self.dim.unwrap_or(1)),
            "adjoint" => RepresentationData::adjoint(g),
            "coadjoint" => RepresentationData::coadjoint(g),
            "matrices" => {
                let ms = self.matrices.as_ref().ok_or_else(|| src.error("matrices", "required"))?;
                let ms: Vec<RatMatrix> = ms.iter().map(|m| rat_matrix(m)).collect::<Result<_, _>>().map_err(|e| src.error("matrices", e))?;
                let dim = ms.first().map_or(0, |m| m.rows());
                RepresentationData::new(g, dim, ms).map_err(|e| src.error("matrices", e))?
            }
            other => return Err(src.error("kind", format!("unknown representation {other:?}"))),
        };
        let module = match &self.lattice {
            None => None,
            Some(rows) => {
                let rows: Vec<Vec<Rat>> = rows
                    .iter()
                    .map(|r| r.iter().map(Num::to_rat).collect::<Result<_, _>>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| src.error("lattice", e))?;
                Some(InfinitesimalModule::new(rep.clone(), rows).map_err(|e| src.error("lattice", e))?)
            }
        };
        Ok((rep, module))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub builtin: Option<String>,
    pub name: Option<String>,
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub base: Vec<String>,
    pub identity: Option<Vec<Num>>,
    pub mul: Option<Vec<String>>,
    pub inv: Option<Vec<String>>,
    #[serde(default)]
    pub action: Vec<String>,
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

impl GroupSection {
    pub fn build(&self, src: &Source) -> Result<CoordGroupSpec, SpecError> {
        if let Some(b) = &self.builtin {
            return Ok(match b.as_str() {
                "plane" => CoordGroupSpec::plane_action(),
                "heisenberg" => CoordGroupSpec::heisenberg(),
                "torus" => CoordGroupSpec::multiplicative_torus(),
                "affine" => CoordGroupSpec::affine(),
                "abelian" => {
                    let vars = self.vars.as_ref().ok_or_else(|| src.error("vars", "required for abelian"))?;
                    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
                    CoordGroupSpec::abelian(&names)
                }
                other => return Err(src.error("builtin", format!("unknown group {other:?}"))),
            });
        }
        let vars = self.vars.as_ref().ok_or_else(|| src.error("vars", "required"))?;
        let mul = self.mul.as_ref().ok_or_else(|| src.error("mul", "required"))?;
        let inv = self.inv.as_ref().ok_or_else(|| src.error("inv", "required"))?;
        let identity = match &self.identity {
            None => None,
            Some(v) => Some(v.iter().map(Num::to_rat).collect::<Result<_, _>>().map_err(|e| src.error("identity", e))?),
        };
        CoordGroupSpec::from_strings(
            self.name.as_deref().unwrap_or("G"),
            &strs(vars),
            &strs(&self.base),
            identity,
            &strs(mul),
            &strs(inv),
            &strs(&self.action),
        )
        .map_err(|e| src.error("group", e))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanEstSection {
    pub form: Option<String>,
    pub cocycle: Option<String>,
    pub degree: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSection {
    pub fiber: Vec<String>,
    pub cocycles: Vec<String>,
    /// Fiber components of a section, for recovering the class.
    pub section: Option<Vec<String>>,
    /// `"unipotent"` compares with upper unitriangular 3x3 matrices.
    pub matrix_model: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteExtensionSection {
    pub group: GroupoidSection,
    pub modulus: usize,
    pub action: Option<Vec<usize>>,
    pub cocycle: Vec<Vec<usize>>,
    pub compare: Option<GroupoidSection>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormSpec {
    SphereArea { k: f64 },
    Symbolic { chart: Vec<String>, expr: String },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodsSection {
    pub form: Option<FormSpec>,
    #[serde(default)]
    pub cycles: Vec<crate::periods::Cycle2>,
    pub lattice: Option<Vec<f64>>,
    /// Period values to test for discreteness instead of integrating.
    pub values: Option<Vec<f64>>,
    pub floor: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJob {
    pub a: String,
    pub x: String,
    pub element: String,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSection {
    #[serde(default)]
    pub normalize: Vec<String>,
    #[serde(default)]
    pub products: Vec<[String; 2]>,
    #[serde(default)]
    pub actions: Vec<ActionJob>,
    #[serde(default)]
    pub sections: Vec<String>,
    pub order: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibers() {
        assert_eq!(parse_fiber("Z").unwrap().classify().to_string(), "Z^1");
        assert_eq!(parse_fiber("Z^2 + Z/4 + Q/Z").unwrap().classify().to_string(), "Z^2 + Z/4 + Q/Z^1");
        assert!(parse_fiber("R").is_err());
    }

    #[test]
    fn diagnostics_carry_lines() {
        let text = "[groupoid]\nkind = \"cyclic\"\norder = \"x\"\n";
        let e = parse_document(text).unwrap_err();
        assert_eq!(e.line, Some(3));
        let src = Source { text: "[groupoid]\nkind = \"nope\"\n" };
        assert_eq!(src.error("kind", "bad").line, Some(2));
    }

    #[test]
    fn brackets_build_an_algebra() {
        let text = "[lie_algebra]\nbasis = [\"x\", \"y\", \"z\"]\nbrackets = [\"[x, y] = z\"]\n";
        let doc = parse_document(text).unwrap();
        let (_, g) = doc.lie_algebra.unwrap().build(&Source { text }).unwrap();
        assert_eq!(g.structure(0, 1)[2], Rat::from_integer(1.into()));
    }
}

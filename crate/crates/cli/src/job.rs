//! Job files: a TOML description of a finite group and a representation of it.

use std::path::Path;
use std::sync::Arc;

use igt_core::grp::{CentralKernel, ClosureMode, Element, FiniteGroup};
use igt_core::linalg::Mat;
use igt_core::projrep::CoverContext;
use igt_core::repmod::Rep;
use serde::Deserialize;

use crate::error::CliError;

pub type MatrixLiteral = Vec<Vec<String>>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Matrices act on column vectors, v ↦ σv.
    #[default]
    Column,
    /// Matrices act on row vectors, v ↦ vσ; transposed on load.
    Row,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Matrix,
    Permutation,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub kind: GroupKind,
    #[serde(default)]
    pub matrices: Vec<MatrixLiteral>,
    #[serde(default)]
    pub permutations: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationBlock {
    pub matrices: Vec<MatrixLiteral>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBlock {
    /// Use the scalar matrices of the group as the kernel.
    #[serde(default)]
    pub scalars: bool,
    /// Kernel generators as words in the group generators (0-based indices).
    #[serde(default)]
    pub words: Vec<Vec<usize>>,
    #[serde(default)]
    pub matrices: Vec<MatrixLiteral>,
    #[serde(default)]
    pub permutations: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Default, Deserialize, serde::Serialize)]
pub struct Metadata {
    pub label: Option<String>,
    pub expected_order: Option<usize>,
    pub expected_projective_order: Option<usize>,
    pub small_group_id: Option<(u64, u64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub conductor: u32,
    #[serde(default)]
    pub convention: Convention,
    pub group: GroupBlock,
    pub representation: Option<RepresentationBlock>,
    pub central_kernel: Option<KernelBlock>,
    #[serde(default)]
    pub metadata: Metadata,
}

/// A job with its group enumerated and representation validated.
pub struct Loaded {
    pub job: JobFile,
    pub group: Arc<FiniteGroup>,
    pub rep: Arc<Rep>,
}

impl JobFile {
    pub fn parse(text: &str) -> Result<JobFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("job file: {e}")))
    }

    pub fn read(path: &Path) -> Result<JobFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        JobFile::parse(&text)
    }

    fn matrix(&self, lit: &MatrixLiteral) -> Result<Mat, CliError> {
        let m = Mat::parse(self.conductor, lit)?;
        Ok(match self.convention {
            Convention::Column => m,
            Convention::Row => m.transpose(),
        })
    }

    fn matrices(&self, lits: &[MatrixLiteral]) -> Result<Vec<Mat>, CliError> {
        lits.iter().map(|l| self.matrix(l)).collect()
    }

    fn generators(&self) -> Result<Vec<Element>, CliError> {
        let g = &self.group;
        match g.kind {
            GroupKind::Matrix => {
                if !g.permutations.is_empty() {
                    return Err(CliError::Input("matrix group lists permutations".into()));
                }
                Ok(self
                    .matrices(&g.matrices)?
                    .into_iter()
                    .map(Element::Matrix)
                    .collect())
            }
            GroupKind::Permutation => {
                if !g.matrices.is_empty() {
                    return Err(CliError::Input("permutation group lists matrices".into()));
                }
                g.permutations
                    .iter()
                    .map(|p| Element::perm_one_based(p).map_err(CliError::from))
                    .collect()
            }
        }
    }

    pub fn load(self, cap: usize) -> Result<Loaded, CliError> {
        let gens = self.generators()?;
        if gens.is_empty() {
            return Err(CliError::Input("group block has no generators".into()));
        }
        let group = Arc::new(FiniteGroup::closure(&gens, ClosureMode::Linear, cap)?);
        let rep = match (&self.representation, self.group.kind) {
            (Some(r), _) => {
                if r.matrices.len() != gens.len() {
                    return Err(CliError::Input(format!(
                        "{} representation matrices for {} group generators",
                        r.matrices.len(),
                        gens.len()
                    )));
                }
                Rep::new(group.clone(), self.matrices(&r.matrices)?)?
            }
            (None, GroupKind::Matrix) => Rep::defining(group.clone())?,
            (None, GroupKind::Permutation) => Rep::permutation(group.clone(), self.conductor)?,
        };
        Ok(Loaded {
            job: self,
            group,
            rep: Arc::new(rep),
        })
    }
}

impl Loaded {
    /// The cover context from the `central_kernel` block; without one, the
    /// kernel is the set of elements the representation sends to scalars.
    pub fn cover(&self) -> Result<CoverContext, CliError> {
        let g = &self.group;
        let block = self.job.central_kernel.clone().unwrap_or(KernelBlock {
            scalars: true,
            ..Default::default()
        });
        let mut gens: Vec<usize> = Vec::new();
        if block.scalars {
            let s = g.subgroup_where(|e| self.rep.element_matrix(e).as_scalar().is_some())?;
            gens.extend(s.generators());
        }
        for w in &block.words {
            gens.push(g.eval_word(w)?);
        }
        for m in self.job.matrices(&block.matrices)? {
            gens.push(self.lookup(&Element::Matrix(m))?);
        }
        for p in &block.permutations {
            gens.push(self.lookup(&Element::perm_one_based(p)?)?);
        }
        Ok(CoverContext::new(g.clone(), CentralKernel::new(g, &gens)?))
    }

    fn lookup(&self, e: &Element) -> Result<usize, CliError> {
        self.group.index_of(e).ok_or_else(|| {
            CliError::Input("kernel generator is not an element of the group".into())
        })
    }
}

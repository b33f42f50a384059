//! One function per subcommand; each returns a serializable report.

use std::path::Path;
use std::sync::Arc;

use igt_core::chars::{decompose, dixon_schneider, CharacterTable, Decomposition};
use igt_core::linalg::{Mat, Subspace};
use igt_core::projrep::{char_is_p_projective, pfr_classify, projective_image, PFR_CAP};
use igt_core::repmod::{pure_tensor_test, wedge_subsets};
use igt_core::varsearch::{
    discriminant_curve_with, invariance_check, invariant_families, isotrivial_family_report,
    locate_in_pencil, poly_span, symplectic_subgroup, GramConvention, IdealFile,
};
use igt_core::{CycElt, Error};
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::job::{Convention, JobFile, Metadata};

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub cap: usize,
}

fn mat_literal(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(CycElt::to_string).collect())
        .collect()
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(T::to_string).collect()
}

#[derive(Debug, Serialize)]
pub struct Expectation {
    pub name: &'static str,
    pub expected: usize,
    pub actual: usize,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub label: Option<String>,
    pub small_group_id: Option<(u64, u64)>,
    pub conductor: u32,
    pub convention: &'static str,
    pub dimension: usize,
    pub order: usize,
    pub exponent: u64,
    pub classes: usize,
    pub generator_orders: Vec<u32>,
    pub scalar_kernel_order: usize,
    pub projective_order: usize,
    pub projective_classes: usize,
    pub expectations: Vec<Expectation>,
}

impl CheckReport {
    pub fn all_ok(&self) -> bool {
        self.expectations.iter().all(|e| e.ok)
    }
}

pub fn check(job: &Path, opts: Options) -> Result<CheckReport, CliError> {
    let l = JobFile::read(job)?.load(opts.cap)?;
    let g = &l.group;
    let proj = projective_image(&l.rep, opts.cap)?;
    let kernel = g.subgroup_where(|e| l.rep.element_matrix(e).as_scalar().is_some())?;
    let Metadata {
        label,
        expected_order,
        expected_projective_order,
        small_group_id,
    } = l.job.metadata.clone();
    let mut expectations = Vec::new();
    if let Some(e) = expected_order {
        expectations.push(Expectation {
            name: "order",
            expected: e,
            actual: g.order(),
            ok: e == g.order(),
        });
    }
    if let Some(e) = expected_projective_order {
        expectations.push(Expectation {
            name: "projective_order",
            expected: e,
            actual: proj.order(),
            ok: e == proj.order(),
        });
    }
    Ok(CheckReport {
        label,
        small_group_id,
        conductor: l.job.conductor,
        convention: match l.job.convention {
            Convention::Column => "column",
            Convention::Row => "row",
        },
        dimension: l.rep.dim(),
        order: g.order(),
        exponent: g.exponent(),
        classes: g.num_classes(),
        generator_orders: (0..g.num_generators())
            .map(|k| g.element_order(g.generator_index(k)))
            .collect(),
        scalar_kernel_order: kernel.order(),
        projective_order: proj.order(),
        projective_classes: proj.num_classes(),
        expectations,
    })
}

#[derive(Debug, Serialize)]
pub struct ClassEntry {
    pub representative_word: Vec<usize>,
    pub size: usize,
    pub order: u32,
}

#[derive(Debug, Serialize)]
pub struct CharacterEntry {
    pub degree: u32,
    pub values: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CharTableReport {
    pub order: usize,
    pub conductor: u32,
    pub prime: u64,
    pub classes: Vec<ClassEntry>,
    pub characters: Vec<CharacterEntry>,
    pub orthogonality: bool,
    pub representation_decomposition: Vec<u32>,
}

pub fn char_table(job: &Path, opts: Options) -> Result<CharTableReport, CliError> {
    let l = JobFile::read(job)?.load(opts.cap)?;
    let g = &l.group;
    let table = dixon_schneider(g)?;
    let orthogonality = table.verify_orthogonality(g);
    if !orthogonality {
        return Err(Error::Invariant("character table fails orthogonality".into()).into());
    }
    let dec = decompose(g, &l.rep.character(), &table)?;
    Ok(CharTableReport {
        order: g.order(),
        conductor: table.conductor(),
        prime: table.prime(),
        classes: g
            .classes()
            .iter()
            .map(|c| ClassEntry {
                representative_word: g.word(c.representative).to_vec(),
                size: c.size(),
                order: c.order,
            })
            .collect(),
        characters: table
            .irreducibles()
            .iter()
            .zip(table.degrees())
            .map(|(chi, &degree)| CharacterEntry {
                degree,
                values: strings(chi.values()),
            })
            .collect(),
        orthogonality,
        representation_decomposition: dec.mult,
    })
}

#[derive(Debug, Serialize)]
pub struct Constituent {
    pub irreducible: usize,
    pub degree: u32,
    pub multiplicity: u32,
}

fn constituents(dec: &Decomposition, table: &CharacterTable) -> Vec<Constituent> {
    dec.constituents()
        .map(|(i, m)| Constituent {
            irreducible: i,
            degree: table.degrees()[i],
            multiplicity: m,
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct BlockEntry {
    pub irreducible: usize,
    pub degree: u32,
    pub rank: u32,
    pub multiplicity: usize,
    pub deterministic_anchor: bool,
    pub anchor_attempts: usize,
}

#[derive(Debug, Serialize)]
pub struct SampleEntry {
    pub label: String,
    pub coords: Vec<Vec<Vec<String>>>,
    pub polynomials: Vec<String>,
    pub invariant: bool,
}

#[derive(Debug, Serialize)]
pub struct PencilEntry {
    pub w1: Vec<String>,
    pub w2: Vec<String>,
    pub degenerate: Vec<(i64, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub located: Option<Located>,
}

/// Position of the `--locate` ideal in the pencil w₁ + λw₂.
#[derive(Debug, Serialize)]
pub struct Located {
    pub member: bool,
    pub lambda: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FamilyEntry {
    pub eta: Vec<Constituent>,
    pub dimension: u64,
    pub blocks: Vec<BlockEntry>,
    pub samples: Vec<SampleEntry>,
    pub pencil: Option<PencilEntry>,
}

#[derive(Debug, Serialize)]
pub struct FamiliesReport {
    /// Conductor of the coefficients in the sample polynomials.
    pub conductor: u32,
    pub degree: u32,
    pub codim: u32,
    pub module_dimension: usize,
    pub character: Vec<Constituent>,
    pub families: Vec<FamilyEntry>,
}

fn read_ideal(path: &Path, n: u32, vars: usize) -> Result<IdealFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let f = IdealFile::parse(&text)?;
    if f.conductor != n {
        return Err(CliError::Input(format!(
            "ideal conductor {} differs from job conductor {n}",
            f.conductor
        )));
    }
    if f.variables != vars {
        return Err(CliError::Input(format!(
            "ideal has {} variables, module has dimension {vars}",
            f.variables
        )));
    }
    if f.polys.is_empty() {
        return Err(CliError::Input("ideal file lists no polynomials".into()));
    }
    Ok(f)
}

pub fn families(
    job: &Path,
    degree: u32,
    codim: u32,
    locate: Option<&Path>,
    opts: Options,
) -> Result<FamiliesReport, CliError> {
    let l = JobFile::read(job)?.load(opts.cap)?;
    let g = &l.group;
    let table = dixon_schneider(g)?;
    // Work over a field containing both the module and the character values.
    let conductor = l.rep.conductor().lcm(&table.conductor());
    let r = &Arc::new(l.rep.embed(conductor)?);
    let target = match locate {
        Some(p) => {
            let f = read_ideal(p, l.rep.conductor(), r.dim())?;
            Some(Subspace::row_space(
                &poly_span(&f.polys)?.1.basis().embed(conductor)?,
            ))
        }
        None => None,
    };
    let fams = invariant_families(r, &table, degree, codim, opts.seed)?;
    let rd_char = igt_core::chars::sym_power_char(g, &r.character(), degree);
    let chi = decompose(g, &rd_char, &table)?;
    let module_dimension =
        (0..degree as usize).fold(1usize, |acc, k| acc * (r.dim() + k) / (k + 1));
    let mut families = Vec::new();
    for fam in &fams {
        let mut samples = Vec::new();
        for s in &fam.samples {
            let invariant = invariance_check(r, &s.polys)?;
            if !invariant {
                return Err(Error::Invariant(format!(
                    "sample {} is not generator-stable",
                    s.label
                ))
                .into());
            }
            samples.push(SampleEntry {
                label: s.label.clone(),
                coords: s.coords.iter().map(mat_literal).collect(),
                polynomials: strings(&s.polys),
                invariant,
            });
        }
        let pencil = match isotrivial_family_report(fam) {
            Ok(p) => Some(PencilEntry {
                w1: strings(&p.w1),
                w2: strings(&p.w2),
                degenerate: p.degenerate,
                located: match &target {
                    Some(t) => {
                        let lambda = locate_in_pencil(fam, t)?.map(|x| x.to_string());
                        Some(Located {
                            member: lambda.is_some(),
                            lambda,
                        })
                    }
                    None => None,
                },
            }),
            Err(Error::NotAPencil(_)) => None,
            Err(e) => return Err(e.into()),
        };
        families.push(FamilyEntry {
            eta: constituents(&fam.eta, &table),
            dimension: fam.grass.dimension,
            blocks: fam
                .grass
                .blocks
                .iter()
                .map(|b| BlockEntry {
                    irreducible: b.component.mu_index,
                    degree: b.component.degree,
                    rank: b.rank,
                    multiplicity: b.anchor.hom_basis.len(),
                    deterministic_anchor: b.anchor.deterministic,
                    anchor_attempts: b.anchor.attempts,
                })
                .collect(),
            samples,
            pencil,
        });
    }
    Ok(FamiliesReport {
        conductor,
        degree,
        codim,
        module_dimension,
        character: constituents(&chi, &table),
        families,
    })
}

#[derive(Debug, Serialize)]
pub struct GeneratorStatus {
    pub generator: usize,
    pub symplectic: bool,
}

#[derive(Debug, Serialize)]
pub struct SymplecticReport {
    pub ideal: Vec<String>,
    pub invariant: bool,
    pub linear_order: usize,
    pub projective_group_order: usize,
    pub symplectic_order: usize,
    pub generators: Vec<GeneratorStatus>,
    pub index: usize,
    pub determinant_ratio_values: usize,
    pub warnings: Vec<String>,
}

pub fn symplectic(job: &Path, ideal: &Path, opts: Options) -> Result<SymplecticReport, CliError> {
    let l = JobFile::read(job)?.load(opts.cap)?;
    let r = &l.rep;
    let f = read_ideal(ideal, r.conductor(), r.dim())?;
    let (d, span) = poly_span(&f.polys)?;
    if span.dim() != f.polys.len() {
        return Err(CliError::Input(
            "ideal generators are linearly dependent".into(),
        ));
    }
    if !invariance_check(r, &f.polys)? {
        return Err(
            Error::Precondition("ideal is not invariant under the generators".into()).into(),
        );
    }
    let proj = projective_image(r, opts.cap)?;
    let s = symplectic_subgroup(r, &proj, d, &span)?;
    let order = s.projective.len();
    if proj.order() % order != 0 || proj.order() / order != s.ratio_values {
        return Err(Error::Invariant(
            "symplectic subgroup index disagrees with the determinant ratio image".into(),
        )
        .into());
    }
    let mut warnings = Vec::new();
    if !s.td_matches {
        warnings.push(format!(
            "t·d = {} differs from the number of variables {}",
            span.dim() as u32 * d,
            r.dim()
        ));
    }
    Ok(SymplecticReport {
        ideal: strings(&f.polys),
        invariant: true,
        linear_order: s.linear.order(),
        projective_group_order: proj.order(),
        symplectic_order: order,
        generators: s
            .generators_inside
            .iter()
            .enumerate()
            .map(|(k, &inside)| GeneratorStatus {
                generator: k + 1,
                symplectic: inside,
            })
            .collect(),
        index: proj.order() / order,
        determinant_ratio_values: s.ratio_values,
        warnings,
    })
}

#[derive(Debug, Serialize)]
pub struct PfrClass {
    pub multiplicities: Vec<u32>,
    pub constituents: Vec<Constituent>,
}

#[derive(Debug, Serialize)]
pub struct PfrReport {
    pub dim: u32,
    pub cover_order: usize,
    pub kernel_order: usize,
    pub quotient_order: usize,
    pub schur_cover_check: &'static str,
    pub representation_is_p_projective: bool,
    pub count: usize,
    pub classes: Vec<PfrClass>,
}

pub fn pfr(
    job: &Path,
    dim: u32,
    assume_schur_cover: bool,
    opts: Options,
) -> Result<PfrReport, CliError> {
    let l = JobFile::read(job)?.load(opts.cap)?;
    let ctx = l.cover()?;
    let schur_cover_check = if assume_schur_cover {
        "skipped"
    } else {
        ctx.check_schur_cover()?;
        "passed"
    };
    let g = &l.group;
    let table = dixon_schneider(g)?;
    let dec = decompose(g, &l.rep.character(), &table)?;
    let cap = if opts.cap == igt_core::grp::DEFAULT_CAP {
        PFR_CAP
    } else {
        opts.cap
    };
    let classes = pfr_classify(&ctx, &table, dim, cap)?;
    Ok(PfrReport {
        dim,
        cover_order: g.order(),
        kernel_order: ctx.kernel.subgroup().order(),
        quotient_order: ctx.quotient_order(),
        schur_cover_check,
        representation_is_p_projective: char_is_p_projective(&dec, &table, &ctx),
        count: classes.len(),
        classes: classes
            .iter()
            .map(|d| PfrClass {
                multiplicities: d.mult.clone(),
                constituents: constituents(d, &table),
            })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct DiscriminantReport {
    pub gram: &'static str,
    pub quadrics: Vec<String>,
    pub discriminant: String,
    pub degree: Option<u32>,
}

pub fn discriminant(ideal: &Path, gram: GramConvention) -> Result<DiscriminantReport, CliError> {
    let text = std::fs::read_to_string(ideal)
        .map_err(|e| CliError::Input(format!("{}: {e}", ideal.display())))?;
    let f = IdealFile::parse(&text)?;
    let d = discriminant_curve_with(&f.polys, gram)?;
    Ok(DiscriminantReport {
        gram: match gram {
            GramConvention::Half => "half",
            GramConvention::Coefficient => "coefficient",
        },
        quadrics: strings(&f.polys),
        degree: d.homogeneous_degree(),
        discriminant: d.to_string(),
    })
}

/// Input of `pure-tensor`: wedge coordinates in colex order of t-subsets.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureTensorFile {
    pub conductor: u32,
    pub dim: usize,
    pub t: usize,
    pub coords: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct PureTensorReport {
    pub dim: usize,
    pub t: usize,
    pub subsets: Vec<Vec<usize>>,
    pub coords: Vec<String>,
    pub decomposable: bool,
}

pub fn pure_tensor(file: &Path) -> Result<PureTensorReport, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let f: PureTensorFile =
        toml::from_str(&text).map_err(|e| CliError::Input(format!("pure-tensor file: {e}")))?;
    if f.t == 0 || f.t > f.dim {
        return Err(CliError::Input(format!(
            "need 1 ≤ t ≤ dim, got t = {} and dim = {}",
            f.t, f.dim
        )));
    }
    let omega = f
        .coords
        .iter()
        .map(|c| CycElt::parse(c, f.conductor))
        .collect::<Result<Vec<_>, _>>()?;
    let decomposable = pure_tensor_test(&omega, f.dim, f.t)?;
    Ok(PureTensorReport {
        dim: f.dim,
        t: f.t,
        subsets: wedge_subsets(f.dim, f.t),
        coords: strings(&omega),
        decomposable,
    })
}

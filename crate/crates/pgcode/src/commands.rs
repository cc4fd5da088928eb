use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use pgcode_core::bounds::bounds;
use pgcode_core::classify::{classify_space, TypeTag};
use pgcode_core::code::{linear_combination, Codeword};
use pgcode_core::construct::{
    bagchi_codeword, cone_codeword, generalized_odd, random_complement_plane, random_flat, random_plane_word,
    random_small_weight, OddParams,
};
use pgcode_core::decompose::{decompose, verify_decomposition, DecomposeError};
use pgcode_core::field::{prime_power, PrimeFieldElement};
use pgcode_core::geometry::ProjSpace;
use pgcode_core::io::{read_codeword, read_flat, write_codeword, CodewordFormat};
use pgcode_core::verify::{
    blocking_report, exhaustive_spectrum, lemma_suite, verify_appendix, SpectrumConfig, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map};

use crate::dto::{self, Classification, Constructed, RecipeDto, ReportDto, SpaceInfo, SpectrumDto, TypeDto};
use crate::{Claim, ClassifyArgs, Cli, Command, ConstructArgs, DecomposeArgs, Family, Format, SpectrumArgs, VerifyArgs};

pub enum Exit {
    Ok,
    Failed,
}

pub fn run(cli: &Cli) -> Result<Exit> {
    if let Some(t) = cli.threads {
        ensure!(t > 0, "--threads must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Classify(a) => classify(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Spectrum(a) => spectrum(a, cli.timing),
        Command::Verify(a) => verify(a, cli.timing),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn order(q: u64) -> Result<u32> {
    ensure!(prime_power(q).is_ok(), "q = {q} is not a prime power");
    u32::try_from(q).with_context(|| format!("q = {q} is too large"))
}

fn space(n: Option<usize>, q: Option<u64>) -> Result<ProjSpace> {
    let n = n.context("--n is required")?;
    let q = order(q.context("--q is required")?)?;
    ensure!(n >= 1, "n must be at least 1");
    Ok(ProjSpace::of(n, q)?)
}

fn read_input(path: &Path) -> Result<Codeword> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_codeword(&text).with_context(|| format!("parsing {}", path.display()))
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Hyperplane => "hyperplane",
        Family::TwoHyperplanes => "two-hyperplanes",
        Family::Bagchi => "bagchi",
        Family::GeneralizedOdd => "generalized-odd",
        Family::Cone => "cone",
        Family::RandomSmall => "random-small",
    }
}

fn recipe(family: &str, c: &Codeword, seed: Option<u64>) -> RecipeDto {
    RecipeDto {
        family: family.to_string(),
        space: SpaceInfo::of(c.space()),
        seed,
        weight: c.weight(),
        params: Map::new(),
        vertex: None,
        plane: None,
        base_values: None,
        terms: None,
        decomposition: None,
    }
}

fn odd_prime(p: Option<u64>) -> Result<u32> {
    let p = p.context("--p is required")?;
    u32::try_from(p).with_context(|| format!("p = {p} is too large"))
}

fn hyperplane_terms(a: &ConstructArgs, s: &ProjSpace, k: usize) -> Result<Vec<(PrimeFieldElement, usize)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let np = s.num_points();
    let idx = if a.hyperplanes.is_empty() {
        let mut v: Vec<usize> = Vec::new();
        while v.len() < k {
            let i = rng.random_range(0..np);
            if !v.contains(&i) {
                v.push(i);
            }
        }
        v
    } else {
        a.hyperplanes.clone()
    };
    ensure!(idx.len() == k, "expected {k} hyperplane indices, got {}", idx.len());
    ensure!(idx.iter().all(|&i| i < np), "hyperplane indices must be below {np}");
    ensure!(k < 2 || idx[0] != idx[1], "hyperplanes must be distinct");
    let p = s.field().p() as u16;
    let coeffs = if a.coeffs.is_empty() {
        (0..k).map(|_| rng.random_range(1..p)).collect()
    } else {
        a.coeffs.clone()
    };
    ensure!(coeffs.len() == k, "expected {k} coefficients, got {}", coeffs.len());
    ensure!(coeffs.iter().all(|&x| x > 0 && x < p), "coefficients must lie in 1..{p}");
    Ok(coeffs.into_iter().map(PrimeFieldElement).zip(idx).collect())
}

fn construct(a: &ConstructArgs) -> Result<Exit> {
    let name = family_name(a.family);
    let (c, r) = match a.family {
        Family::Hyperplane | Family::TwoHyperplanes => {
            let s = space(a.n, a.q)?;
            let k = if a.family == Family::Hyperplane { 1 } else { 2 };
            let ts: Vec<_> = hyperplane_terms(a, &s, k)?
                .into_iter()
                .map(|(x, i)| (x, s.hyperplane_by_index(i)))
                .collect();
            let c = linear_combination(&s, &ts);
            let mut r = recipe(name, &c, Some(a.seed));
            r.terms = Some(dto::terms(&ts));
            (c, r)
        }
        Family::Bagchi => {
            let c = bagchi_codeword(odd_prime(a.p)?)?;
            let r = recipe(name, &c, None);
            (c, r)
        }
        Family::GeneralizedOdd => {
            let p = odd_prime(a.p)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let params = OddParams::random(p, &mut rng)?;
            let c = generalized_odd(&params)?;
            let mut r = recipe(name, &c, Some(a.seed));
            r.params.insert("gamma".into(), json!(params.gamma.0));
            r.params.insert("lambdas".into(), json!(params.lambdas.iter().map(|l| l.0).collect::<Vec<_>>()));
            r.params.insert(
                "collineation".into(),
                json!(params.g.matrix().iter().map(|row| dto::ids(row)).collect::<Vec<_>>()),
            );
            r.params.insert("center".into(), json!(params.center()));
            (c, r)
        }
        Family::Cone => {
            let s = space(a.n, a.q)?;
            ensure!(s.n() >= 3, "cones need n >= 3");
            let tag = a.base.as_deref().context("--base is required")?;
            let tag = TypeTag::parse(tag).with_context(|| format!("unknown plane type {tag:?}"))?;
            let plane = ProjSpace::new(2, s.field().clone());
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let Some(base) = random_plane_word(&plane, tag, &mut rng)? else {
                bail!("no {tag} plane word over GF({})", s.q());
            };
            let kappa = random_flat(&s, s.n() as isize - 3, &mut rng);
            let pi = random_complement_plane(&s, &kappa, &mut rng);
            let c = cone_codeword(&s, &kappa, &pi, &base)?;
            let mut r = recipe(name, &c, Some(a.seed));
            r.params.insert("base".into(), json!(tag.name()));
            r.vertex = Some(dto::rows(&kappa));
            r.plane = Some(dto::rows(&pi));
            r.base_values = Some(base.values().iter().map(|v| v.0).collect());
            (c, r)
        }
        Family::RandomSmall => {
            let s = space(a.n, a.q)?;
            let (c, rc) = random_small_weight(s.n(), s.q() as u32, a.seed)?;
            let mut r = recipe(name, &c, Some(a.seed));
            r.params.insert("base".into(), json!(rc.family.name()));
            r.vertex = Some(dto::rows(&rc.sampled_vertex));
            r.plane = Some(dto::rows(&rc.sampled_plane));
            r.base_values = Some(rc.sampled_base.values().iter().map(|v| v.0).collect());
            r.decomposition = Some(dto::DecompositionDto::of(&rc.decomposition));
            (c, r)
        }
    };
    let out = a.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.pgcode")));
    let recipe_path = out.with_extension("recipe.json");
    let fmt = if a.sparse { CodewordFormat::Sparse } else { CodewordFormat::Dense };
    fs::write(&out, write_codeword(&c, fmt)).with_context(|| format!("writing {}", out.display()))?;
    let mut text = serde_json::to_string(&r)?;
    text.push('\n');
    fs::write(&recipe_path, text).with_context(|| format!("writing {}", recipe_path.display()))?;
    log::info!("wrote {} and {}", out.display(), recipe_path.display());
    print_json(&Constructed {
        family: name.to_string(),
        weight: c.weight(),
        output: out.display().to_string(),
        recipe: recipe_path.display().to_string(),
    })?;
    Ok(Exit::Ok)
}

fn classify(a: &ClassifyArgs) -> Result<Exit> {
    let c = read_input(&a.input)?;
    let s = c.space();
    let flat = match &a.flat {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(read_flat(s, &text).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => None,
    };
    let t = classify_space(&c, flat.as_ref().unwrap_or(&s.whole()))?;
    let table = bounds(s.n(), s.q() as u64).ok();
    let t = TypeDto::of(&t);
    print_json(&Classification {
        space: SpaceInfo::of(s),
        flat: flat.as_ref().map(dto::rows),
        tag: t.tag,
        weight: t.weight,
        witness: t.witness,
        alternative: t.alternative,
        within_b: table.as_ref().map(|b| b.within_b(c.weight())),
        bounds: table.as_ref().map(dto::BoundsDto::of),
        secants: dto::secants(&c.secant_spectrum()),
    })?;
    Ok(Exit::Ok)
}

fn decompose_cmd(a: &DecomposeArgs) -> Result<Exit> {
    let c = read_input(&a.input)?;
    let input = a.input.display().to_string();
    let failure = |msg: String, report| {
        let mut f = dto::FailureDto::of(&input, &c, msg, report);
        f.codeword = write_codeword(&c, CodewordFormat::Sparse);
        f
    };
    match decompose(&c) {
        Ok(d) if verify_decomposition(&c, &d) => {
            print_json(&dto::DecompositionDto::of(&d))?;
            Ok(Exit::Ok)
        }
        Ok(_) => {
            print_json(&failure("decomposition does not reproduce the input".into(), None))?;
            Ok(Exit::Failed)
        }
        Err(e) => {
            let report = match &e {
                DecomposeError::DecompositionFailed(r) => Some(r.as_ref()),
                _ => None,
            };
            log::warn!("{e}");
            print_json(&failure(e.to_string(), report))?;
            Ok(Exit::Failed)
        }
    }
}

fn spectrum(a: &SpectrumArgs, timing: bool) -> Result<Exit> {
    let s = space(Some(a.n), Some(a.q))?;
    let config = SpectrumConfig { budget: a.budget, max_weight: a.max_weight };
    let sp = exhaustive_spectrum(s.n(), s.q() as u32, &config)?;
    match a.format {
        Format::Json => print_json(&SpectrumDto::of(&sp, &s, timing))?,
        Format::Csv => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "weight,count")?;
            for (w, k) in &sp.histogram {
                writeln!(out, "{w},{k}")?;
            }
        }
        Format::Pgcode => bail!("spectrum output is json or csv"),
    }
    let falsified = sp.reports().iter().any(VerificationReport::is_falsified);
    Ok(if falsified { Exit::Failed } else { Exit::Ok })
}

fn instances(a: &VerifyArgs) -> Result<Vec<(Option<u64>, Codeword)>> {
    if let Some(path) = &a.input {
        return Ok(vec![(None, read_input(path)?)]);
    }
    let s = space(a.n, a.q)?;
    (0..a.count as u64)
        .map(|i| {
            let seed = a.seed.wrapping_add(i);
            Ok((Some(seed), random_small_weight(s.n(), s.q() as u32, seed)?.0))
        })
        .collect()
}

fn tagged(mut r: VerificationReport, seed: Option<u64>) -> VerificationReport {
    if let Some(seed) = seed {
        r = r.with_param("seed", seed);
    }
    r
}

fn verify(a: &VerifyArgs, timing: bool) -> Result<Exit> {
    let reports: Vec<VerificationReport> = match a.claim {
        Claim::Appendix => {
            let n = a.n.context("--n is required")?;
            let q = a.q.context("--q is required")?;
            order(q)?;
            vec![verify_appendix(q, n)?]
        }
        Claim::Spectrum => {
            let s = space(a.n, a.q)?;
            let config = SpectrumConfig { budget: a.budget, max_weight: None };
            exhaustive_spectrum(s.n(), s.q() as u32, &config)?.reports()
        }
        Claim::Blocking => instances(a)?
            .into_iter()
            .map(|(seed, c)| tagged(blocking_report(c.space(), &c.support()), seed))
            .collect(),
        Claim::Lemmas => {
            let mut all = Vec::new();
            for (seed, c) in instances(a)? {
                all.extend(lemma_suite(&c)?.into_iter().map(|r| tagged(r, seed)));
            }
            all
        }
    };
    let mut out = std::io::stdout().lock();
    for r in &reports {
        serde_json::to_writer(&mut out, &ReportDto::of(r, timing))?;
        writeln!(out)?;
    }
    let falsified = reports.iter().any(VerificationReport::is_falsified);
    Ok(if falsified { Exit::Failed } else { Exit::Ok })
}

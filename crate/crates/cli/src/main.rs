use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::algebra::primes::factor_rational_prime;
use hecke_core::algebra::{catalog, Embedding, Field};
use hecke_core::arith::primes_up_to;
use hecke_core::codec::{elem_to_strings, parse_elem};
use hecke_core::compatsys::{
    check_bounded_conductor, check_integrality, check_purity, detect_artin, load_system, save_system,
    system_from_characters, verify, CompatibleSystem, Mode, VerificationReport,
};
use hecke_core::hecke::file::{load_character, save_character, CharacterFile};
use hecke_core::hecke::random::{random_character, RandomOptions};
use hecke_core::hecke::{from_infinity_type, presets, HeckeCharacter, InfinityType};
use hecke_core::multdep::{local_probe, mult_relation, ProbeMode, ProbeOptions, ProbeWitness, RelationJson};
use hecke_core::rayclass::Modulus;
use hecke_core::reconstruct::{reconstruct_character, ReconstructOptions};
use hecke_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INSUFFICIENT: u8 = 3;
const EXIT_NOT_HECKE: u8 = 4;

const DEFAULT_PROBE_BOUND: u64 = 1000;

#[derive(Parser)]
#[command(name = "hecke", version, about = "Hecke characters and their compatible systems")]
struct Cli {
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for prime sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Bound on residue characteristics (indexed primes, places or probe primes, per command).
    #[arg(long, global = true)]
    bound_primes: Option<u64>,
    /// Largest residue characteristic of reconstruction probe primes.
    #[arg(long, global = true)]
    bound_height: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, signature, discriminant, units and sample factorizations.
    FieldInfo { label: String },
    /// Writes a character file.
    CharMake(CharMake),
    /// Writes the system attached to one or more character files.
    SystemGen {
        #[arg(required = true)]
        characters: Vec<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Checks a system file against the axioms and the selected conjectural clauses.
    Verify(VerifyArgs),
    /// Recovers the Hecke character behind a one-dimensional system file.
    Reconstruct {
        system: PathBuf,
        /// Realization to use instead of reading the data alone.
        #[arg(long = "character")]
        characters: Vec<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        probes: usize,
    },
    /// Solves `c^t = ζ·Π a_i^{m_i}` and probes residue fields for witnesses.
    Multdep {
        field: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// Bases; a literal starting with a minus sign is written `0-…`.
        a: Vec<String>,
        /// Probe places up to this residue characteristic.
        #[arg(long)]
        probe: Option<u64>,
        /// Look for relations with t prime to this prime.
        #[arg(long)]
        ell: Option<u64>,
    },
}

#[derive(Args)]
struct CharMake {
    #[arg(long)]
    field: String,
    #[arg(long)]
    value_field: Option<String>,
    #[arg(long, value_enum, conflicts_with_all = ["random", "infinity_type"])]
    preset: Option<Preset>,
    /// A seeded random character.
    #[arg(long, conflicts_with = "infinity_type")]
    random: bool,
    /// Comma-separated `n_σ`, one per automorphism.
    #[arg(long, allow_hyphen_values = true)]
    infinity_type: Option<String>,
    /// Generator of the finite part of the modulus.
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    modulus: String,
    /// Comma-separated 0/1 flags, one per real place.
    #[arg(long)]
    real_places: Option<String>,
    /// Store the primitive character.
    #[arg(long)]
    primitive: bool,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Cm,
    Legendre,
    Trivial,
    Norm,
    InverseNorm,
}

#[derive(Args)]
struct VerifyArgs {
    system: PathBuf,
    /// Character files realizing the system.
    #[arg(long = "character")]
    characters: Vec<PathBuf>,
    #[arg(long, conflicts_with = "weak")]
    strict: bool,
    #[arg(long)]
    weak: bool,
    #[arg(long)]
    purity: bool,
    #[arg(long)]
    conductor: bool,
    #[arg(long)]
    integrality: bool,
    #[arg(long)]
    artin: bool,
}

/// A command's result: what to print, and the exit code.
struct Outcome {
    value: Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(value: Value, text: String) -> Outcome {
        Outcome { value, text, code: 0 }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::NotHeckeType(_)) => EXIT_NOT_HECKE,
        Some(Error::InsufficientData(_) | Error::NoRealization(_)) => EXIT_INSUFFICIENT,
        _ => EXIT_USAGE,
    }
}

fn field(label: &str) -> anyhow::Result<Field> {
    Ok(catalog::field(label)?)
}

fn field_info(label: &str, bound: u64) -> anyhow::Result<Outcome> {
    let k = field(label)?;
    let mut factorizations = Vec::new();
    let mut lines = Vec::new();
    for p in primes_up_to(bound) {
        let ps = factor_rational_prime(&k, p)?;
        let parts: Vec<Value> = ps
            .iter()
            .map(|q| json!({ "generator": elem_to_strings(&q.generator), "f": q.f, "e": q.e }))
            .collect();
        lines.push(format!(
            "  {p} = {}",
            ps.iter()
                .map(|q| {
                    let g = format!("({})", q.generator);
                    if q.e > 1 {
                        format!("{g}^{}", q.e)
                    } else {
                        g
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        ));
        factorizations.push(json!({ "p": p, "primes": parts }));
    }
    let units: Vec<String> = k.units.fundamental_units.iter().map(|u| u.to_string()).collect();
    let value = json!({
        "label": k.label,
        "degree": k.d(),
        "min_poly": k.min_poly,
        "signature": [k.signature.0, k.signature.1],
        "discriminant": k.discriminant.to_string(),
        "automorphisms": k.aut_images.iter().map(elem_to_strings).collect::<Vec<_>>(),
        "torsion_order": k.units.torsion_order,
        "torsion_generator": elem_to_strings(&k.units.torsion_generator),
        "fundamental_units": k.units.fundamental_units.iter().map(elem_to_strings).collect::<Vec<_>>(),
        "factorizations": factorizations,
    });
    let text = format!(
        "{}: degree {}, signature ({}, {}), discriminant {}\nroots of unity: {} (generator {})\nfundamental units: [{}]\nfactorizations up to {bound}:\n{}",
        k.label,
        k.d(),
        k.signature.0,
        k.signature.1,
        k.discriminant,
        k.units.torsion_order,
        k.units.torsion_generator,
        units.join(", "),
        lines.join("\n")
    );
    Ok(Outcome::ok(value, text))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| anyhow::anyhow!("bad {what} entry `{x}`")))
        .collect()
}

fn char_make(args: &CharMake, seed: u64) -> anyhow::Result<Outcome> {
    let k = field(&args.field)?;
    let l = field(args.value_field.as_deref().unwrap_or(presets::default_value_field(&args.field)))?;
    let chi: HeckeCharacter = if let Some(p) = args.preset {
        match p {
            Preset::Cm => {
                if k.label != "gaussian" {
                    bail!(Error::FieldMismatch("the CM preset lives over gaussian".into()));
                }
                presets::cm_gaussian()?
            }
            Preset::Legendre => {
                if k.label != "rationals" {
                    bail!(Error::FieldMismatch("the Legendre preset lives over rationals".into()));
                }
                presets::legendre_five()?
            }
            Preset::Trivial => presets::trivial(k, l)?,
            Preset::Norm => presets::norm(k, l)?,
            Preset::InverseNorm => presets::inverse_norm(k, l)?,
        }
    } else if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_character(&k, &l, &RandomOptions::default(), &mut rng)?
    } else {
        let n: Vec<i64> = match &args.infinity_type {
            Some(s) => parse_list(s, "infinity type")?,
            None => vec![0; k.d()],
        };
        let real = match &args.real_places {
            Some(s) => parse_list::<u8>(s, "real place")?.into_iter().map(|b| b != 0).collect(),
            None => vec![false; k.real_places().len()],
        };
        let m = Modulus::new(&k, &parse_elem(&k, &args.modulus)?, real)?;
        from_infinity_type(&Embedding::find(k.clone(), l)?, &m, InfinityType(n))?
    };
    let chi = if args.primitive { chi.primitive()? } else { chi };
    save_character(&chi, &args.out)?;
    let file = CharacterFile::from_character(&chi)?;
    let text = format!(
        "wrote {}: infinity type {:?}, modulus {}, finite part of order {}",
        args.out.display(),
        chi.infinity_type().0,
        chi.modulus().finite,
        chi.finite_part().order()
    );
    Ok(Outcome::ok(serde_json::to_value(file)?, text))
}

fn load_characters(paths: &[PathBuf]) -> anyhow::Result<Vec<HeckeCharacter>> {
    paths
        .iter()
        .map(|p| load_character(p).with_context(|| format!("reading {}", p.display())))
        .collect()
}

fn system_gen(chars: &[PathBuf], out: &Path, bound: u64) -> anyhow::Result<Outcome> {
    let chis = load_characters(chars)?;
    if bound == 0 {
        log::warn!("prime bound 0: the Frobenius table is empty");
    }
    let sys = system_from_characters(&chis, bound)?;
    save_system(&sys, out)?;
    let value = json!({
        "out": out.display().to_string(),
        "dimension": sys.dimension,
        "entries": sys.frobenius.len(),
        "ramification_set": sys.ramification.iter().map(|q| elem_to_strings(&q.generator)).collect::<Vec<_>>(),
    });
    let text = format!("wrote {}: {} Frobenius entries up to {bound}", out.display(), sys.frobenius.len());
    Ok(Outcome::ok(value, text))
}

fn with_characters(sys: CompatibleSystem, paths: &[PathBuf]) -> anyhow::Result<CompatibleSystem> {
    if paths.is_empty() {
        return Ok(sys);
    }
    Ok(sys.with_realization(&load_characters(paths)?)?)
}

fn verify_cmd(args: &VerifyArgs, place_bound: u64) -> anyhow::Result<Outcome> {
    let sys = with_characters(load_system(&args.system)?, &args.characters)?;
    let any_check = args.purity || args.conductor || args.integrality || args.artin;
    let sweep = args.strict || args.weak || !any_check || sys.realization.is_some();
    let mode = if args.weak { Mode::Weak } else { Mode::Strict };
    let needs_realization = sweep || args.conductor || args.artin;
    if needs_realization && sys.realization.is_none() {
        let value = json!({
            "error": "realization required",
            "detail": "the axiom sweep, --conductor and --artin need the characters realizing the system; pass them with --character",
        });
        let text = "realization required: pass the realizing characters with --character".to_string();
        return Ok(Outcome { value, text, code: EXIT_INSUFFICIENT });
    }
    let r_bound = sys.frobenius.keys().map(|(p, _)| *p).max().unwrap_or(0);
    let mut report = if sweep { verify(&sys, r_bound, place_bound, mode)? } else { VerificationReport::empty(mode) };
    if args.purity {
        report.purity = Some(check_purity(&sys, 100)?);
    }
    if args.conductor {
        report.bounded_conductor = Some(check_bounded_conductor(&sys, place_bound)?);
    }
    if args.integrality {
        report.integrality = Some(check_integrality(&sys));
    }
    if args.artin {
        report.artin = Some(detect_artin(&sys, place_bound)?);
    }
    let pass = report.passed();
    let mut lines = vec![format!(
        "{}: {} pairs over {} places{}",
        if pass { "pass" } else { "FAIL" },
        report.pairs_checked,
        report.places_checked,
        if report.tolerated > 0 { format!(", {} tolerated", report.tolerated) } else { String::new() }
    )];
    if let Some(f) = report.failures.first() {
        lines.push(format!(
            "witness: {} at r = {:?} (p = {:?}), place {:?} (p = {}): {}",
            f.kind, f.prime, f.prime_char, f.place, f.place_char, f.detail
        ));
    }
    if let Some(v) = &report.purity {
        lines.push(format!("purity: t = {} (max deviation {:e})", v.t, v.max_deviation));
    }
    if let Some(v) = &report.bounded_conductor {
        lines.push(format!("conductor: stable = {}, {:?}", v.stable, v.conductor));
    }
    if let Some(v) = &report.integrality {
        lines.push(format!("integrality: integral = {}, twist {:?}", v.integral, v.twist));
    }
    if let Some(v) = &report.artin {
        lines.push(format!("artin: {:?}, order {:?}", v.verdict, v.order));
    }
    Ok(Outcome { value: serde_json::to_value(&report)?, text: lines.join("\n"), code: if pass { 0 } else { EXIT_FAILED } })
}

fn reconstruct_cmd(
    system: &Path,
    chars: &[PathBuf],
    out: Option<&Path>,
    opts: &ReconstructOptions,
) -> anyhow::Result<Outcome> {
    let sys = with_characters(load_system(system)?, chars)?;
    let r = reconstruct_character(&sys, opts)?;
    if let Some(p) = out {
        save_character(&r.character, p)?;
    }
    let text = format!(
        "infinity type {:?}, conductor {}, finite part of order {} ({}, conductor from {}), ℓ = {}, {} primes regenerated",
        r.infinity_type.0,
        r.character.modulus().finite,
        r.character.finite_part().order(),
        r.finite_part_method,
        r.conductor_source,
        r.ell,
        r.regenerated
    );
    Ok(Outcome::ok(serde_json::to_value(r.to_json()?)?, text))
}

/// The probe runs when no relation exists, or when `probe` was asked for.
fn multdep_cmd(label: &str, c: &str, a: &[String], probe: Option<u64>, ell: Option<u64>) -> anyhow::Result<Outcome> {
    let k = field(label)?;
    let c = parse_elem(&k, c)?;
    let a = a.iter().map(|x| parse_elem(&k, x)).collect::<hecke_core::Result<Vec<_>>>()?;
    let rel = mult_relation(&k, &c, &a, ell)?;
    let mode = ell.map_or(ProbeMode::Exact, ProbeMode::PrimeTo);
    let bound = probe.unwrap_or(DEFAULT_PROBE_BOUND);
    let witnesses: Vec<ProbeWitness> = if rel.is_some() && probe.is_none() {
        vec![]
    } else {
        local_probe(&k, &c, &a, &ProbeOptions::new(bound, mode))?.witnesses
    };
    let relation = rel.as_ref().map(RelationJson::from_relation);
    let text = match &rel {
        Some(r) => format!(
            "c^{} = ({}) · Π a_i^m with m = {:?}; without the root of unity, t = {}",
            r.t, r.zeta, r.m, r.t_exact
        ),
        None => "no relation".to_string(),
    } + &if witnesses.is_empty() {
        String::new()
    } else {
        format!(
            "\nwitnesses below {bound}: {}",
            witnesses
                .iter()
                .map(|w| format!("({}) over {} with t = {}", w.prime.join(","), w.residue_char, w.t_q))
                .collect::<Vec<_>>()
                .join(", ")
        )
    };
    Ok(Outcome::ok(json!({ "relation": relation, "witnesses": witnesses }), text))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::FieldInfo { label } => field_info(label, cli.bound_primes.unwrap_or(13)),
        Command::CharMake(args) => char_make(args, cli.seed),
        Command::SystemGen { characters, out } => system_gen(characters, out, cli.bound_primes.unwrap_or(100)),
        Command::Verify(args) => verify_cmd(args, cli.bound_primes.unwrap_or(100)),
        Command::Reconstruct { system, characters, out, probes } => {
            let opts = ReconstructOptions {
                probe_count: *probes,
                probe_height: cli.bound_height,
                ..ReconstructOptions::default()
            };
            reconstruct_cmd(system, characters, out.as_deref(), &opts)
        }
        Command::Multdep { field, c, a, probe, ell } => {
            multdep_cmd(field, c, a, probe.or(cli.bound_primes), *ell)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(o) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&o.value).expect("json output")),
                Format::Text => println!("{}", o.text),
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Json => println!("{}", json!({ "error": format!("{e:#}"), "exit_code": code })),
                Format::Text => eprintln!("error: {e:#}"),
            }
            ExitCode::from(code)
        }
    }
}

//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hecke_core::algebra::catalog;
use hecke_core::algebra::primes::factor_rational_prime;
use hecke_core::compatsys::checks::{check_bounded_conductor, check_purity, detect_artin, ArtinKind};
use hecke_core::compatsys::{system_from_characters, verify_strict, CompatibleSystem, SystemFile};
use hecke_core::hecke::file::CharacterFile;
use hecke_core::hecke::presets;
use hecke_core::hecke::random::{random_character, RandomOptions};
use hecke_core::hecke::HeckeCharacter;
use hecke_core::multdep::probe::{local_probe_with_plan, ProbePlan};
use hecke_core::multdep::{mult_relation, random_instance, ProbeMode};
use hecke_core::rayclass::Modulus;
use hecke_core::reconstruct::{reconstruct_character, ReconstructOptions};
use hecke_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn field_pair(label: &str) -> (hecke_core::algebra::Field, hecke_core::algebra::Field) {
    (
        catalog::field(label).unwrap(),
        catalog::field(presets::default_value_field(label)).unwrap(),
    )
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {t:.1?}, limit {limit:?}"));
    }
    Ok(())
}

/// Number of points on `y^2 = x^3 - x` over F_p, the point at infinity included.
fn point_count(p: u64) -> u64 {
    let mut squares = vec![0u64; p as usize];
    for y in 0..p {
        squares[(y * y % p) as usize] += 1;
    }
    let mut n = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + p - x) % p;
        n += squares[rhs as usize];
    }
    n
}

fn cm_point_counts() -> Verdict {
    let start = Instant::now();
    let chi = presets::cm_gaussian().map_err(|e| e.to_string())?;
    let sys = system_from_characters(&[chi], 500).map_err(|e| e.to_string())?;
    let k = sys.k().clone();
    let mut checked = 0;
    let mut spots = Vec::new();
    for p in hecke_core::arith::primes_up_to(500).into_iter().filter(|p| p % 4 == 1) {
        for q in factor_rational_prime(&k, p).map_err(|e| e.to_string())?.iter() {
            let root = sys.root(q).ok_or(format!("no entry above {p}"))?;
            let tr = k.trace(&root);
            let a = p as i64 + 1 - point_count(p) as i64;
            if tr != num::BigRational::from_integer(a.into()) {
                return Err(format!("p = {p}: trace {tr}, oracle {a}"));
            }
            checked += 1;
            if p == 5 || p == 13 {
                spots.push((p, a));
            }
        }
    }
    if !spots.contains(&(5, -2)) || !spots.contains(&(13, 6)) {
        return Err(format!("spot values {spots:?}"));
    }
    within(start, Duration::from_secs(30), "point-count check")?;
    Ok(format!("{checked} primes, a_5 = -2, a_13 = 6, {:.1?}", start.elapsed()))
}

fn same_character(a: &HeckeCharacter, b: &HeckeCharacter) -> bool {
    a.modulus() == b.modulus() && a.infinity_type() == b.infinity_type() && a.finite_part() == b.finite_part()
}

fn round_trip() -> Verdict {
    let start = Instant::now();
    let opts = ReconstructOptions::default();
    let mut total = 0;
    for (i, label) in catalog::labels().into_iter().enumerate() {
        let (k, l) = field_pair(label);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for j in 0..10 {
            let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng).map_err(|e| e.to_string())?;
            let want = chi.primitive().map_err(|e| e.to_string())?;
            let sys = system_from_characters(&[chi], 300).map_err(|e| e.to_string())?;
            let text = SystemFile::from_system(&sys).to_json();
            let loaded = SystemFile::from_json(&text)
                .and_then(|f| f.to_system())
                .map_err(|e| e.to_string())?;
            for (route, s) in [("realized", &sys), ("file", &loaded)] {
                let got = reconstruct_character(s, &opts)
                    .map_err(|e| format!("{label} #{j} ({route}): {e}"))?
                    .character;
                if !same_character(&got, &want) {
                    return Err(format!(
                        "{label} #{j} ({route}): got {:?} mod {}, expected {:?} mod {}",
                        got.infinity_type().0,
                        got.modulus().finite,
                        want.infinity_type().0,
                        want.modulus().finite
                    ));
                }
            }
            total += 1;
        }
    }
    within(start, Duration::from_secs(300), "round trip")?;
    Ok(format!("{total} characters over {} fields, {:.1?}", catalog::labels().len(), start.elapsed()))
}

/// Named characters plus one random character per field.
fn generated_systems(bound: u64) -> Result<Vec<(String, CompatibleSystem)>, Error> {
    let mut out = vec![
        ("cm".to_string(), system_from_characters(&[presets::cm_gaussian()?], bound)?),
        ("legendre".to_string(), system_from_characters(&[presets::legendre_five()?], bound)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for label in catalog::labels() {
        let (k, l) = field_pair(label);
        out.push((format!("norm/{label}"), system_from_characters(&[presets::norm(k.clone(), l.clone())?], bound)?));
        let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng)?;
        out.push((format!("random/{label}"), system_from_characters(&[chi], bound)?));
    }
    Ok(out)
}

fn axiom_sweep() -> Verdict {
    let start = Instant::now();
    let systems = generated_systems(300).map_err(|e| e.to_string())?;
    let mut least = u64::MAX;
    let mut pairs = 0;
    for (name, sys) in &systems {
        let rep = verify_strict(sys, 300, 300).map_err(|e| format!("{name}: {e}"))?;
        if !rep.passed() {
            return Err(format!("{name}: {:?}", rep.failures.first()));
        }
        if rep.pairs_checked < 1000 {
            return Err(format!("{name}: only {} pairs", rep.pairs_checked));
        }
        least = least.min(rep.pairs_checked);
        pairs += rep.pairs_checked;
    }
    Ok(format!(
        "{} systems, {pairs} pairs, at least {least} per system, {:.1?}",
        systems.len(),
        start.elapsed()
    ))
}

fn local_global() -> Verdict {
    let start = Instant::now();
    let mut instances = 0;
    let mut with_relation = 0;
    for (i, label) in catalog::labels().into_iter().enumerate() {
        let k = catalog::field(label).unwrap();
        let w = k.units.torsion_order;
        let ell = [3u64, 5, 7, 11].into_iter().find(|l| w % l != 0).unwrap();
        let plan = ProbePlan::new(&k, 100_000, true);
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + i as u64);
        for n in 0..100 {
            let inst = random_instance(&k, 1000, &[2, ell], &mut rng);
            let exact = mult_relation(&k, &inst.c, &inst.a, None).map_err(|e| e.to_string())?;
            for mode in [ProbeMode::Exact, ProbeMode::PrimeTo(ell)] {
                let global = exact.as_ref().map_or(false, |r| r.holds(mode));
                let rep = local_probe_with_plan(&k, &plan, &inst.c, &inst.a, mode, true).map_err(|e| e.to_string())?;
                let local = rep.witness_count == 0;
                if global != local {
                    return Err(format!(
                        "{label} #{n} {mode:?}: exact solver says {global}, probe says {local} (witness {:?})",
                        rep.first_witness()
                    ));
                }
            }
            with_relation += exact.as_ref().map_or(0, |r| r.holds(ProbeMode::Exact) as usize);
            instances += 1;
        }
    }
    within(start, Duration::from_secs(120), "local-global sweep")?;
    Ok(format!("{instances} instances, {with_relation} with exact relations, 0 mismatches, {:.1?}", start.elapsed()))
}

fn purity_and_conductor() -> Verdict {
    let cm = system_from_characters(&[presets::cm_gaussian().map_err(|e| e.to_string())?], 300).map_err(|e| e.to_string())?;
    let k = catalog::field("gaussian").unwrap();
    let norm = system_from_characters(&[presets::norm(k.clone(), k.clone()).map_err(|e| e.to_string())?], 300)
        .map_err(|e| e.to_string())?;
    let leg = system_from_characters(&[presets::legendre_five().map_err(|e| e.to_string())?], 300)
        .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (name, sys, t) in [("cm", &cm, 0.5), ("norm", &norm, 1.0), ("finite order", &leg, 0.0)] {
        let v = check_purity(sys, 100).map_err(|e| e.to_string())?;
        if !v.pass || v.t != t || v.max_deviation > 1e-6 {
            return Err(format!("{name}: fitted t = {}, deviation {:e}", v.t, v.max_deviation));
        }
        parts.push(format!("{name} t = {}", v.t));
    }
    let c = check_bounded_conductor(&cm, 300).map_err(|e| e.to_string())?;
    let want = Modulus::finite_only(&k, &k.elem(&[2, -2])).map_err(|e| e.to_string())?;
    if !c.stable || c.modulus(&cm).map_err(|e| e.to_string())? != Some(want) {
        return Err(format!("cm conductor verdict {:?}", c.distinct));
    }
    Ok(format!("{}; cm conductor (1+i)^3 at {} places", parts.join(", "), c.places_sampled))
}

fn artin_detection() -> Verdict {
    let leg = system_from_characters(&[presets::legendre_five().map_err(|e| e.to_string())?], 100)
        .map_err(|e| e.to_string())?;
    let cm = system_from_characters(&[presets::cm_gaussian().map_err(|e| e.to_string())?], 100)
        .map_err(|e| e.to_string())?;
    let a = detect_artin(&leg, 300).map_err(|e| e.to_string())?;
    if a.verdict != ArtinKind::ArtinLike || a.order != Some(2) {
        return Err(format!("legendre: {:?} order {:?}", a.verdict, a.order));
    }
    let b = detect_artin(&cm, 300).map_err(|e| e.to_string())?;
    if b.verdict != ArtinKind::UnboundedTrend {
        return Err(format!("cm: {:?}", b.verdict));
    }
    Ok(format!("legendre order 2 at {} places, cm unbounded", a.orders.len()))
}

#[derive(Debug, Clone, Copy)]
enum Corruption {
    Perturb,
    SwapConjugates,
    NonMultiplicative,
}

/// Applies a corruption to the Frobenius data, returning a description.
fn corrupt<R: Rng>(sys: &mut CompatibleSystem, how: Corruption, rng: &mut R) -> Option<String> {
    let l = sys.l().clone();
    let keys: Vec<_> = sys.frobenius.keys().cloned().collect();
    match how {
        Corruption::Perturb => {
            let key = &keys[rng.gen_range(0..keys.len())];
            let e = sys.frobenius.get_mut(key).unwrap();
            let i = rng.gen_range(0..e.poly.len() - 1);
            let delta = l.elem(&(0..l.d()).map(|j| if j == 0 { rng.gen_range(1..=3) } else { 0 }).collect::<Vec<_>>());
            e.poly[i] = l.add(&e.poly[i], &delta);
            Some(format!("perturbed coefficient {i} above {}", key.0))
        }
        Corruption::SwapConjugates => {
            let mut order: Vec<usize> = (0..keys.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            for i in order {
                let a = &keys[i];
                let partner = keys.iter().find(|b| b.0 == a.0 && *b != a)?;
                if sys.frobenius[a].poly != sys.frobenius[partner].poly {
                    let pa = sys.frobenius[a].poly.clone();
                    let pb = sys.frobenius[partner].poly.clone();
                    sys.frobenius.get_mut(a).unwrap().poly = pb;
                    sys.frobenius.get_mut(partner).unwrap().poly = pa;
                    return Some(format!("swapped the two primes above {}", a.0));
                }
            }
            None
        }
        Corruption::NonMultiplicative => {
            let w = l.units.torsion_order as i64;
            let key = &keys[rng.gen_range(keys.len() / 2..keys.len())];
            let e = sys.frobenius.get_mut(key).unwrap();
            let z = l.zeta_pow(rng.gen_range(1..w));
            e.poly[0] = l.mul(&e.poly[0], &z);
            Some(format!("twisted f_r above {} by a root of unity", key.0))
        }
    }
}

fn adversarial() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = ReconstructOptions::default();
    let mut pool: Vec<CompatibleSystem> = vec![system_from_characters(&[presets::cm_gaussian().unwrap()], 200).unwrap()];
    for label in ["gaussian", "eisenstein", "qsqrtm7", "qsqrt5", "cyclo5", "cyclo8"] {
        let (k, l) = field_pair(label);
        let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng).map_err(|e| e.to_string())?;
        pool.push(system_from_characters(&[chi], 200).map_err(|e| e.to_string())?);
    }
    let kinds = [Corruption::Perturb, Corruption::SwapConjugates, Corruption::NonMultiplicative];
    let mut done = 0;
    let mut attempt = 0;
    while done < 50 {
        attempt += 1;
        if attempt > 500 {
            return Err(format!("only {done} corrupted files could be produced"));
        }
        let base = &pool[rng.gen_range(0..pool.len())];
        let kind = kinds[done % kinds.len()];
        let mut bad = base.data_only();
        let Some(what) = corrupt(&mut bad, kind, &mut rng) else { continue };
        let text = SystemFile::from_system(&bad).to_json();
        let loaded = SystemFile::from_json(&text).and_then(|f| f.to_system()).map_err(|e| e.to_string())?;
        match reconstruct_character(&loaded, &opts) {
            Err(Error::NotHeckeType(w)) if !w.is_empty() => {}
            Ok(_) => return Err(format!("file {done} ({what}): reconstruction accepted")),
            Err(e) => return Err(format!("file {done} ({what}): no witness, {e}")),
        }
        let mut against = loaded.clone();
        against.realization = base.realization.clone();
        let rep = verify_strict(&against, 200, 100).map_err(|e| e.to_string())?;
        if rep.passed() || rep.failures.is_empty() {
            return Err(format!("file {done} ({what}): verification accepted"));
        }
        done += 1;
    }
    Ok("50 corrupted files rejected by reconstruction and verification, each with a witness".into())
}

fn determinism() -> Verdict {
    let run = || -> Result<Vec<String>, Error> {
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for label in ["gaussian", "qsqrt2", "cyclo12"] {
            let (k, l) = field_pair(label);
            let chi = random_character(&k, &l, &RandomOptions::default(), &mut rng)?;
            out.push(CharacterFile::from_character(&chi)?.to_json());
            let sys = system_from_characters(&[chi], 150)?;
            out.push(SystemFile::from_system(&sys).to_json());
            let r = reconstruct_character(&sys.data_only(), &ReconstructOptions::default())?;
            out.push(serde_json::to_string(&r.to_json()?)?);
        }
        Ok(out)
    };
    let a = run().map_err(|e| e.to_string())?;
    let dir = std::env::temp_dir().join(format!("hecke-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for (i, text) in a.iter().enumerate() {
        std::fs::write(dir.join(format!("{i}.json")), text).map_err(|e| e.to_string())?;
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().map_err(|e| e.to_string())?;
    let b = pool.install(run).map_err(|e| e.to_string())?;
    for (i, text) in b.iter().enumerate() {
        let first = std::fs::read(dir.join(format!("{i}.json"))).map_err(|e| e.to_string())?;
        if first != text.as_bytes() {
            return Err(format!("file {i} differs between runs"));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} files byte-identical across two runs", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("CM point counts", cm_point_counts),
        ("round-trip reconstruction", round_trip),
        ("axiom sweep", axiom_sweep),
        ("local-global", local_global),
        ("purity and conductor", purity_and_conductor),
        ("Artin detection", artin_detection),
        ("adversarial files", adversarial),
        ("determinism", determinism),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(d) => println!("criterion {} [{name}]: PASS ({d})", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({d})", i + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

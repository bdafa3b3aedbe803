use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::rngs::OsRng;
use semecs::bench::{run_bench, BenchRecord, Operation};
use semecs::energy::{builtin_profile, energy_compute, EnergyProfile, Work, BUILTIN_PROFILES};
use semecs::eta::{eta_keygen, eta_sign, eta_verify, EtaSignature};
use semecs::keystore::{
    atomic_write, decode_eta_public, decode_schnorr_public, decode_semecs_public, encode_eta_public,
    encode_schnorr_public, encode_semecs_public, eta_state_from_record, eta_state_record, load_state,
    public_key_overhead, schnorr_keypair_from_record, schnorr_secret_record, semecs_state_from_record,
    semecs_state_record, KeyFileHeader, Role, SchemeTag, SignerStateRecord, StateFile,
};
use semecs::schnorr::{schnorr_keygen, schnorr_sign, schnorr_verify, SchnorrSignature};
use semecs::semecs::{semecs_keygen, semecs_sign, semecs_verify_indexed, semecs_verify_search, SignedEnvelope};
use semecs::{DigestAlg, Group, GroupId, Ristretto255, Suite, ToyGroup};

use crate::{BenchScheme, DigestArg, Failure, GroupArg, SchemeArg};

type CmdResult = Result<(), Failure>;

/// Calls `$f::<G>(args)` with `G` chosen by a runtime group identifier.
macro_rules! by_group {
    ($id:expr, $f:ident($($arg:expr),* $(,)?)) => {
        match $id {
            GroupId::Toy => $f::<ToyGroup>($($arg),*),
            GroupId::Production => $f::<Ristretto255>($($arg),*),
        }
    };
}

fn scheme_tag(s: SchemeArg) -> SchemeTag {
    match s {
        SchemeArg::Schnorr => SchemeTag::Schnorr,
        SchemeArg::Eta => SchemeTag::Eta,
        SchemeArg::Semecs => SchemeTag::Semecs,
    }
}

fn digest_name(d: DigestAlg) -> &'static str {
    match d {
        DigestAlg::Blake2s256 => "blake2s",
        DigestAlg::Sha256 => "sha256",
    }
}

fn toy_suite(digest: DigestAlg) -> Suite<ToyGroup> {
    Suite::new(ToyGroup::medium(), digest)
}

fn prod_suite(digest: DigestAlg) -> Suite<Ristretto255> {
    Suite::new(Ristretto255::new(), digest)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| Failure::State(format!("{}: {e}", path.display())))
}

fn malformed(e: semecs::Error) -> Failure {
    Failure::Usage(e.to_string())
}

// ---------------------------------------------------------------------------
// keygen

pub fn keygen(
    scheme: SchemeArg,
    group: GroupArg,
    capacity: Option<u64>,
    out_prefix: Option<PathBuf>,
    digest: DigestArg,
    force: bool,
) -> CmdResult {
    let tag = scheme_tag(scheme);
    match (tag, capacity) {
        (SchemeTag::Schnorr, Some(_)) => {
            return Err(Failure::Usage("schnorr keys are not K-time; drop -K".into()));
        }
        (SchemeTag::Eta | SchemeTag::Semecs, None) => {
            return Err(Failure::Usage(format!("{} needs a capacity: pass -K <n>", tag.name())));
        }
        _ => {}
    }
    let group_name = match group {
        GroupArg::Toy => "toy",
        GroupArg::Prod => "prod",
    };
    let prefix = out_prefix.unwrap_or_else(|| {
        let home = std::env::var_os("SEMECS_HOME").map(PathBuf::from).unwrap_or_default();
        home.join(format!("{}-{group_name}", tag.name()))
    });
    let sk_path = with_suffix(&prefix, ".sk");
    let pk_path = with_suffix(&prefix, ".pk");
    if !force {
        for p in [&sk_path, &pk_path] {
            if p.exists() {
                return Err(Failure::Usage(format!("{} exists; pass --force to replace it", p.display())));
            }
        }
    }
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let digest = match digest {
        DigestArg::Blake2s => DigestAlg::Blake2s256,
        DigestArg::Sha256 => DigestAlg::Sha256,
    };
    let k = capacity.unwrap_or(0);
    match group {
        GroupArg::Toy => keygen_in(&toy_suite(digest), tag, k, &sk_path, &pk_path),
        GroupArg::Prod => keygen_in(&prod_suite(digest), tag, k, &sk_path, &pk_path),
    }
}

fn keygen_in<G: Group>(suite: &Suite<G>, tag: SchemeTag, k: u64, sk_path: &Path, pk_path: &Path) -> CmdResult {
    let start = Instant::now();
    let (sk, pk) = match tag {
        SchemeTag::Semecs => {
            let (st, pk) = semecs_keygen(suite, k, &mut OsRng)?;
            (semecs_state_record(suite, &st), encode_semecs_public(suite, &pk))
        }
        SchemeTag::Eta => {
            let (st, pk) = eta_keygen(suite, k, &mut OsRng)?;
            (eta_state_record(suite, &st), encode_eta_public(suite, &pk))
        }
        SchemeTag::Schnorr => {
            let kp = schnorr_keygen(suite, &mut OsRng)?;
            (schnorr_secret_record(suite, &kp), encode_schnorr_public(suite, &kp.public))
        }
    };
    let elapsed = start.elapsed();
    let sk = sk.to_bytes();
    atomic_write(sk_path, &sk)?;
    atomic_write(pk_path, &pk)?;

    println!("scheme:      {}", tag.name());
    println!("group:       {}", G::ID.name());
    println!("digest:      {}", digest_name(suite.digest));
    if tag != SchemeTag::Schnorr {
        println!("K:           {k}");
    }
    println!("secret key:  {} ({} octets)", sk_path.display(), sk.len());
    println!("public key:  {} ({} octets, {} of header)", pk_path.display(), pk.len(), public_key_overhead(suite, tag));
    println!("keygen time: {:.3} s", elapsed.as_secs_f64());
    Ok(())
}

// ---------------------------------------------------------------------------
// sign

pub fn sign(sk: &Path, input: &Path, out: &Path) -> CmdResult {
    let rec = load_state(sk)?;
    let msg = read_input(input)?;
    let (bytes, note) = match rec.header.scheme {
        SchemeTag::Semecs => by_group!(rec.header.group, sign_semecs(&rec, sk, &msg))?,
        SchemeTag::Eta => by_group!(rec.header.group, sign_eta(&rec, sk, &msg))?,
        SchemeTag::Schnorr => by_group!(rec.header.group, sign_schnorr(&rec, &msg))?,
    };
    fs::write(out, &bytes).map_err(|e| Failure::State(format!("{}: {e}", out.display())))?;
    eprintln!("{note}");
    Ok(())
}

fn sign_semecs<G: Group>(rec: &SignerStateRecord, sk: &Path, msg: &[u8]) -> Result<(Vec<u8>, String), Failure> {
    let (suite, mut st) = semecs_state_from_record::<G>(rec)?;
    let env = semecs_sign(&suite, &mut st, msg, StateFile::new(sk, suite.clone()))?;
    let note = format!(
        "signed with index {} ({} remaining), {} octets over the message",
        env.index.unwrap_or_default(),
        st.remaining(),
        env.overhead()
    );
    Ok((env.to_bytes(), note))
}

fn sign_eta<G: Group>(rec: &SignerStateRecord, sk: &Path, msg: &[u8]) -> Result<(Vec<u8>, String), Failure> {
    let (suite, mut st) = eta_state_from_record::<G>(rec)?;
    let sig = eta_sign(&suite, &mut st, msg, &mut OsRng, StateFile::new(sk, suite.clone()))?;
    let mut out = sig.to_bytes(&suite.group);
    let note = format!(
        "signed with index {} ({} remaining), {} octets over the message",
        sig.index,
        st.remaining(),
        out.len()
    );
    out.extend_from_slice(msg);
    Ok((out, note))
}

fn sign_schnorr<G: Group>(rec: &SignerStateRecord, msg: &[u8]) -> Result<(Vec<u8>, String), Failure> {
    let (suite, kp) = schnorr_keypair_from_record::<G>(rec)?;
    let sig = schnorr_sign(&suite, &kp, msg, &mut OsRng)?;
    let mut out = sig.to_bytes(&suite.group);
    let note = format!("signed, {} octets over the message", out.len());
    out.extend_from_slice(msg);
    Ok((out, note))
}

// ---------------------------------------------------------------------------
// verify

pub fn verify(pk: &Path, env: &Path, no_index: bool) -> CmdResult {
    let pk_bytes = read_input(pk)?;
    let env_bytes = read_input(env)?;
    let header = KeyFileHeader::parse(&pk_bytes).map_err(malformed)?;
    if header.role != Role::Public {
        return Err(Failure::Usage(format!("{} is a {} file, not a public key", pk.display(), header.role.name())));
    }
    if no_index && header.scheme != SchemeTag::Semecs {
        return Err(Failure::Usage(format!("--no-index applies to semecs only, not {}", header.scheme.name())));
    }
    let msg = match header.scheme {
        SchemeTag::Semecs => by_group!(header.group, verify_semecs(&pk_bytes, &env_bytes, no_index))?,
        SchemeTag::Eta => by_group!(header.group, verify_eta(&pk_bytes, &env_bytes))?,
        SchemeTag::Schnorr => by_group!(header.group, verify_schnorr(&pk_bytes, &env_bytes))?,
    };
    let Some(msg) = msg else {
        return Err(Failure::Rejected("signature rejected".into()));
    };
    io::stdout().write_all(&msg)?;
    Ok(())
}

fn verify_semecs<G: Group>(pk: &[u8], env: &[u8], no_index: bool) -> Result<Option<Vec<u8>>, Failure> {
    let (suite, pk) = decode_semecs_public::<G>(pk).map_err(malformed)?;
    let env = SignedEnvelope::from_bytes(env, suite.scalar_len()).map_err(malformed)?;
    if !no_index && env.index.is_some() {
        return Ok(semecs_verify_indexed(&suite, &pk, &env));
    }
    if pk.search_index().is_none() {
        return Err(Failure::Usage("this key has colliding tokens and cannot be searched".into()));
    }
    let outcome = semecs_verify_search(&suite, &pk, &env.without_index());
    eprintln!("search made {} comparisons", outcome.comparisons);
    Ok(outcome.verified.map(|(_, m)| m))
}

fn verify_eta<G: Group>(pk: &[u8], env: &[u8]) -> Result<Option<Vec<u8>>, Failure> {
    let (suite, pk) = decode_eta_public::<G>(pk).map_err(malformed)?;
    let n = EtaSignature::<G>::encoded_len(&suite.group);
    if env.len() < n {
        return Err(Failure::Usage("envelope shorter than a signature".into()));
    }
    let (sig, msg) = env.split_at(n);
    let sig = EtaSignature::from_bytes(&suite.group, sig).map_err(malformed)?;
    Ok(eta_verify(&suite, &pk, msg, &sig).then(|| msg.to_vec()))
}

fn verify_schnorr<G: Group>(pk: &[u8], env: &[u8]) -> Result<Option<Vec<u8>>, Failure> {
    let (suite, y) = decode_schnorr_public::<G>(pk).map_err(malformed)?;
    let n = 2 * suite.scalar_len();
    if env.len() < n {
        return Err(Failure::Usage("envelope shorter than a signature".into()));
    }
    let (sig, msg) = env.split_at(n);
    let sig = SchnorrSignature::from_bytes(&suite.group, sig).map_err(malformed)?;
    Ok(schnorr_verify(&suite, &y, msg, &sig).then(|| msg.to_vec()))
}

// ---------------------------------------------------------------------------
// inspect

pub fn inspect(file: &Path) -> CmdResult {
    let bytes = read_input(file)?;
    let header = KeyFileHeader::parse(&bytes)?;
    println!("file:        {}", file.display());
    println!("size:        {} octets", bytes.len());
    println!("scheme:      {}", header.scheme.name());
    println!("group:       {}", header.group.name());
    println!("role:        {}", header.role.name());
    println!("version:     {}", header.version);
    if header.role == Role::Public {
        by_group!(header.group, inspect_public(header.scheme, &bytes))
    } else {
        let rec = SignerStateRecord::from_bytes(&bytes)?;
        println!("digest:      {}", digest_name(rec.digest));
        println!("secret:      {} octets (not shown)", rec.secret.len());
        if header.scheme != SchemeTag::Schnorr {
            println!("index j:     {}", rec.index);
            println!("K:           {}", rec.capacity);
            println!("remaining:   {}", rec.capacity - rec.index);
        }
        Ok(())
    }
}

fn inspect_public<G: Group>(scheme: SchemeTag, bytes: &[u8]) -> CmdResult {
    let (digest, capacity, overhead) = match scheme {
        SchemeTag::Semecs => {
            let (s, pk) = decode_semecs_public::<G>(bytes)?;
            if pk.search_index().is_none() {
                println!("search:      unavailable (colliding tokens)");
            }
            (s.digest, Some(pk.capacity()), public_key_overhead(&s, scheme))
        }
        SchemeTag::Eta => {
            let (s, pk) = decode_eta_public::<G>(bytes)?;
            (s.digest, Some(pk.capacity()), public_key_overhead(&s, scheme))
        }
        SchemeTag::Schnorr => {
            let (s, _) = decode_schnorr_public::<G>(bytes)?;
            (s.digest, None, public_key_overhead(&s, scheme))
        }
    };
    println!("digest:      {}", digest_name(digest));
    if let Some(k) = capacity {
        println!("K:           {k}");
    }
    println!("header:      {overhead} octets");
    println!("payload:     {} octets", bytes.len() - overhead);
    Ok(())
}

// ---------------------------------------------------------------------------
// bench and energy

fn lookup_profile(name: &str) -> Result<EnergyProfile, Failure> {
    builtin_profile(name)
        .ok_or_else(|| Failure::Usage(format!("unknown profile {name:?}; known: {}", BUILTIN_PROFILES.join(", "))))
}

fn bench_in<G: Group>(suite: &Suite<G>, schemes: &[SchemeTag], iters: u64) -> Result<Vec<BenchRecord>, Failure> {
    let mut rows = Vec::new();
    for &scheme in schemes {
        let mut ops = vec![Operation::Sign, Operation::Verify];
        if scheme == SchemeTag::Semecs {
            ops.push(Operation::VerifySearch);
        }
        for op in ops {
            rows.push(run_bench(suite, scheme, op, iters, &mut OsRng)?);
        }
    }
    Ok(rows)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into())
}

fn print_table(rows: &[BenchRecord]) {
    println!(
        "{:<8} {:<14} {:>8} {:>12} {:>12} {:>12} {:>8} {:>8} {:>8} {:>12} {:>12}",
        "scheme", "operation", "iters", "median_ns", "p10_ns", "p90_ns", "exp", "dexp", "tx_B", "compute_mJ", "comm_uJ"
    );
    for r in rows {
        println!(
            "{:<8} {:<14} {:>8} {:>12} {:>12} {:>12} {:>8.2} {:>8.2} {:>8} {:>12} {:>12}",
            r.scheme,
            r.operation,
            r.iters,
            r.median_ns,
            r.p10_ns,
            r.p90_ns,
            r.exp_ops,
            r.double_exp_ops,
            r.tx_bytes,
            fmt_opt(r.compute_mj),
            fmt_opt(r.comm_uj)
        );
    }
}

fn write_csv<W: Write>(w: W, rows: &[BenchRecord]) -> CmdResult {
    let mut w = csv::Writer::from_writer(w);
    for r in rows {
        w.serialize(r).map_err(|e| Failure::State(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn bench(
    scheme: BenchScheme,
    group: GroupArg,
    iters: u64,
    csv_out: Option<&Path>,
    json_out: Option<&Path>,
    profile: Option<&str>,
) -> CmdResult {
    let profile = profile.map(lookup_profile).transpose()?;
    let schemes: &[SchemeTag] = match scheme {
        BenchScheme::All => &[SchemeTag::Schnorr, SchemeTag::Eta, SchemeTag::Semecs],
        BenchScheme::Schnorr => &[SchemeTag::Schnorr],
        BenchScheme::Eta => &[SchemeTag::Eta],
        BenchScheme::Semecs => &[SchemeTag::Semecs],
    };
    let mut rows = match group {
        GroupArg::Toy => bench_in(&toy_suite(DigestAlg::Blake2s256), schemes, iters)?,
        GroupArg::Prod => bench_in(&prod_suite(DigestAlg::Blake2s256), schemes, iters)?,
    };
    if let Some(p) = &profile {
        rows = rows.into_iter().map(|r| r.with_energy(p)).collect();
    }
    print_table(&rows);
    if let Some(path) = csv_out {
        write_csv(fs::File::create(path)?, &rows)?;
    }
    if let Some(path) = json_out {
        let f = fs::File::create(path)?;
        serde_json::to_writer_pretty(f, &rows).map_err(|e| Failure::State(e.to_string()))?;
    }
    Ok(())
}

pub fn energy_report(
    profile: &str,
    from: Option<&Path>,
    cycles: Option<u64>,
    bits: Option<u64>,
    out: Option<&Path>,
) -> CmdResult {
    let profile = lookup_profile(profile)?;
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    if let Some(path) = from {
        let mut reader =
            csv::Reader::from_path(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let mut rows = Vec::new();
        for r in reader.deserialize::<BenchRecord>() {
            let r = r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            rows.push(r.with_energy(&profile));
        }
        return write_csv(sink, &rows);
    }
    if cycles.is_none() && bits.is_none() {
        return Err(Failure::Usage("give --from <csv>, or --cycles and/or --bits".into()));
    }
    let e = energy_compute(&profile, Work::Cycles(cycles.unwrap_or(0)), bits.unwrap_or(0));
    writeln!(sink, "profile:     {}", profile.name)?;
    writeln!(sink, "nJ/cycle:    {}", profile.nj_per_cycle)?;
    writeln!(sink, "nJ/bit:      {}", profile.nj_per_bit)?;
    writeln!(sink, "compute_mJ:  {:.6}", e.compute_mj)?;
    writeln!(sink, "comm_uJ:     {:.6}", e.comm_uj)?;
    Ok(())
}

//! Key files and durable signer state.
//!
//! Every file starts with an 8-octet header followed by the suite
//! description (digest identifier and group parameters):
//!
//! ```text
//! "SMKS" ‖ version (1) ‖ scheme (1) ‖ group (1) ‖ role (1) ‖ digest (1) ‖ group params
//! ```
//!
//! Signer state records then carry `secret ‖ j (8) ‖ K (8) ‖ tag (32)` where
//! the tag is BLAKE2s-256 over everything before it. Public keys carry
//! `K (8) ‖ payload` for the K-time schemes and just `Y` for Schnorr. All
//! integers are big-endian.
//!
//! State files are replaced atomically (temp file, fsync, rename) while an
//! exclusive lock on a sidecar `.lock` file is held, so two processes cannot
//! both consume the same index.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eta::{EtaPublicKey, EtaSigningState};
use crate::fdh::{integrity_digest, DigestAlg};
use crate::group::{Group, GroupId, Ristretto255, ToyGroup};
use crate::schnorr::SchnorrKeyPair;
use crate::semecs::{SemecsPublicKey, SemecsSigningState};
use crate::state::StateSink;
use crate::suite::Suite;

pub const MAGIC: [u8; 4] = *b"SMKS";
pub const FORMAT_VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 8;
const TAG_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum SchemeTag {
    Schnorr = 0x01,
    Eta = 0x02,
    Semecs = 0x03,
}

impl SchemeTag {
    pub fn from_octet(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(SchemeTag::Schnorr),
            0x02 => Some(SchemeTag::Eta),
            0x03 => Some(SchemeTag::Semecs),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeTag::Schnorr => "schnorr",
            SchemeTag::Eta => "eta",
            SchemeTag::Semecs => "semecs",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Role {
    Secret = 0x01,
    Public = 0x02,
    State = 0x03,
}

impl Role {
    fn from_octet(b: u8) -> Option<Self> {
        match b {
            0x01 => Some(Role::Secret),
            0x02 => Some(Role::Public),
            0x03 => Some(Role::State),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::Secret => "secret",
            Role::Public => "public",
            Role::State => "state",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyFileHeader {
    pub version: u8,
    pub scheme: SchemeTag,
    pub group: GroupId,
    pub role: Role,
}

impl KeyFileHeader {
    pub fn new(scheme: SchemeTag, group: GroupId, role: Role) -> Self {
        KeyFileHeader { version: FORMAT_VERSION, scheme, group, role }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4] = self.version;
        out[5] = self.scheme as u8;
        out[6] = self.group as u8;
        out[7] = self.role as u8;
        out
    }

    /// Reads and validates the header at the front of `bytes`.
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN || bytes[..4] != MAGIC {
            return Err(Error::corrupt("missing SMKS magic"));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(Error::corrupt(format!("unsupported format version {}", bytes[4])));
        }
        let scheme = SchemeTag::from_octet(bytes[5]).ok_or_else(|| Error::corrupt("unknown scheme tag"))?;
        let group = GroupId::from_octet(bytes[6]).ok_or_else(|| Error::corrupt("unknown group id"))?;
        let role = Role::from_octet(bytes[7]).ok_or_else(|| Error::corrupt("unknown role"))?;
        Ok(KeyFileHeader { version: bytes[4], scheme, group, role })
    }
}

/// Length of the group-parameter block and the scalar length it implies.
fn suite_shape(group: GroupId, bytes: &[u8]) -> Result<(usize, usize)> {
    match group {
        GroupId::Toy => {
            let (g, used) = ToyGroup::decode_params(bytes).map_err(|e| Error::corrupt(e.to_string()))?;
            Ok((used, g.scalar_len()))
        }
        GroupId::Production => Ok((0, Ristretto255::new().scalar_len())),
    }
}

fn encode_suite<G: Group>(suite: &Suite<G>) -> Vec<u8> {
    let mut out = vec![suite.digest as u8];
    out.extend_from_slice(&suite.group.encode_params());
    out
}

/// Parses `digest ‖ params`, returning the suite and the octets consumed.
fn decode_suite<G: Group>(bytes: &[u8]) -> Result<(Suite<G>, usize)> {
    let (&d, rest) = bytes.split_first().ok_or_else(|| Error::corrupt("missing digest identifier"))?;
    let digest = DigestAlg::from_octet(d).ok_or_else(|| Error::corrupt("unknown digest identifier"))?;
    let (group, used) = G::decode_params(rest).map_err(|e| Error::corrupt(e.to_string()))?;
    Ok((Suite::new(group, digest), 1 + used))
}

fn expect_header<G: Group>(bytes: &[u8], scheme: SchemeTag, role: Role) -> Result<()> {
    let h = KeyFileHeader::parse(bytes)?;
    if h.scheme != scheme || h.role != role || h.group != G::ID {
        return Err(Error::corrupt(format!(
            "expected {} {} key for {} group, found {} {} for {}",
            scheme.name(),
            role.name(),
            G::ID.name(),
            h.scheme.name(),
            h.role.name(),
            h.group.name()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Signer state records

/// Group-agnostic view of a signer state file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignerStateRecord {
    pub header: KeyFileHeader,
    pub digest: DigestAlg,
    pub group_params: Vec<u8>,
    /// `y` for SEMECS and Schnorr, `y ‖ r_j` for ETA.
    pub secret: Vec<u8>,
    pub index: u64,
    pub capacity: u64,
}

impl SignerStateRecord {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 1 + self.group_params.len() + self.secret.len() + 16 + TAG_LEN);
        out.extend_from_slice(&self.header.to_bytes());
        out.push(self.digest as u8);
        out.extend_from_slice(&self.group_params);
        out.extend_from_slice(&self.secret);
        out.extend_from_slice(&self.index.to_be_bytes());
        out.extend_from_slice(&self.capacity.to_be_bytes());
        let tag = integrity_digest(&out);
        out.extend_from_slice(&tag);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header = KeyFileHeader::parse(bytes)?;
        if header.role == Role::Public {
            return Err(Error::corrupt("public key file where signer state was expected"));
        }
        if bytes.len() < HEADER_LEN + TAG_LEN + 1 {
            return Err(Error::corrupt("truncated state file"));
        }
        let (body, tag) = bytes.split_at(bytes.len() - TAG_LEN);
        if integrity_digest(body) != tag {
            return Err(Error::corrupt("integrity tag mismatch"));
        }
        let digest =
            DigestAlg::from_octet(body[HEADER_LEN]).ok_or_else(|| Error::corrupt("unknown digest identifier"))?;
        let rest = &body[HEADER_LEN + 1..];
        let (params_len, scalar_len) = suite_shape(header.group, rest)?;
        let secret_len = match header.scheme {
            SchemeTag::Eta => 2 * scalar_len,
            SchemeTag::Schnorr | SchemeTag::Semecs => scalar_len,
        };
        if rest.len() != params_len + secret_len + 16 {
            return Err(Error::corrupt("state record has the wrong length"));
        }
        let (group_params, rest) = rest.split_at(params_len);
        let (secret, counters) = rest.split_at(secret_len);
        let index = u64::from_be_bytes(counters[..8].try_into().unwrap());
        let capacity = u64::from_be_bytes(counters[8..].try_into().unwrap());
        if index > capacity {
            return Err(Error::corrupt(format!("counter {index} exceeds capacity {capacity}")));
        }
        Ok(SignerStateRecord {
            header,
            digest,
            group_params: group_params.to_vec(),
            secret: secret.to_vec(),
            index,
            capacity,
        })
    }

    fn suite<G: Group>(&self) -> Result<Suite<G>> {
        if self.header.group != G::ID {
            return Err(Error::corrupt("state file belongs to a different group"));
        }
        let (group, _) = G::decode_params(&self.group_params).map_err(|e| Error::corrupt(e.to_string()))?;
        Ok(Suite::new(group, self.digest))
    }
}

fn decode_secret<G: Group>(group: &G, bytes: &[u8]) -> Result<G::Scalar> {
    group.decode_scalar(bytes).map_err(|e| Error::corrupt(e.to_string()))
}

pub fn semecs_state_record<G: Group>(suite: &Suite<G>, state: &SemecsSigningState<G>) -> SignerStateRecord {
    SignerStateRecord {
        header: KeyFileHeader::new(SchemeTag::Semecs, G::ID, Role::State),
        digest: suite.digest,
        group_params: suite.group.encode_params(),
        secret: state.secret_bytes(&suite.group),
        index: state.index(),
        capacity: state.capacity(),
    }
}

pub fn semecs_state_from_record<G: Group>(rec: &SignerStateRecord) -> Result<(Suite<G>, SemecsSigningState<G>)> {
    if rec.header.scheme != SchemeTag::Semecs || rec.header.role != Role::State {
        return Err(Error::corrupt("not a SEMECS signer state"));
    }
    let suite = rec.suite::<G>()?;
    let y = decode_secret(&suite.group, &rec.secret)?;
    Ok((suite, SemecsSigningState::from_parts(y, rec.index, rec.capacity)))
}

pub fn eta_state_record<G: Group>(suite: &Suite<G>, state: &EtaSigningState<G>) -> SignerStateRecord {
    let mut secret = suite.group.encode_scalar(&state.secret);
    secret.extend_from_slice(&suite.group.encode_scalar(&state.chain));
    SignerStateRecord {
        header: KeyFileHeader::new(SchemeTag::Eta, G::ID, Role::State),
        digest: suite.digest,
        group_params: suite.group.encode_params(),
        secret,
        index: state.index(),
        capacity: state.capacity(),
    }
}

pub fn eta_state_from_record<G: Group>(rec: &SignerStateRecord) -> Result<(Suite<G>, EtaSigningState<G>)> {
    if rec.header.scheme != SchemeTag::Eta || rec.header.role != Role::State {
        return Err(Error::corrupt("not an ETA signer state"));
    }
    let suite = rec.suite::<G>()?;
    let l = suite.scalar_len();
    let y = decode_secret(&suite.group, &rec.secret[..l])?;
    let r = decode_secret(&suite.group, &rec.secret[l..])?;
    Ok((suite, EtaSigningState::from_parts(y, r, rec.index, rec.capacity)))
}

/// Schnorr keys are not counter-bound; `j` and `K` are stored as zero.
pub fn schnorr_secret_record<G: Group>(suite: &Suite<G>, kp: &SchnorrKeyPair<G>) -> SignerStateRecord {
    SignerStateRecord {
        header: KeyFileHeader::new(SchemeTag::Schnorr, G::ID, Role::Secret),
        digest: suite.digest,
        group_params: suite.group.encode_params(),
        secret: suite.group.encode_scalar(kp.secret()),
        index: 0,
        capacity: 0,
    }
}

pub fn schnorr_keypair_from_record<G: Group>(rec: &SignerStateRecord) -> Result<(Suite<G>, SchnorrKeyPair<G>)> {
    if rec.header.scheme != SchemeTag::Schnorr || rec.header.role != Role::Secret {
        return Err(Error::corrupt("not a Schnorr secret key"));
    }
    let suite = rec.suite::<G>()?;
    let y = decode_secret(&suite.group, &rec.secret)?;
    let kp = SchnorrKeyPair::from_secret(&suite, y);
    Ok((suite, kp))
}

// ---------------------------------------------------------------------------
// Public keys

/// Header, suite description, and (for K-time schemes) the capacity field:
/// everything in a public key file other than the payload.
pub fn public_key_overhead<G: Group>(suite: &Suite<G>, scheme: SchemeTag) -> usize {
    let counter = if scheme == SchemeTag::Schnorr { 0 } else { 8 };
    HEADER_LEN + encode_suite(suite).len() + counter
}

fn public_prefix<G: Group>(suite: &Suite<G>, scheme: SchemeTag) -> Vec<u8> {
    let mut out = KeyFileHeader::new(scheme, G::ID, Role::Public).to_bytes().to_vec();
    out.extend_from_slice(&encode_suite(suite));
    out
}

/// Splits a K-time public key file into suite, capacity, and payload.
fn parse_ktime_public<G: Group>(bytes: &[u8], scheme: SchemeTag) -> Result<(Suite<G>, u64, &[u8])> {
    expect_header::<G>(bytes, scheme, Role::Public)?;
    let (suite, used) = decode_suite::<G>(&bytes[HEADER_LEN..])?;
    let rest = &bytes[HEADER_LEN + used..];
    if rest.len() < 8 {
        return Err(Error::corrupt("truncated public key"));
    }
    let capacity = u64::from_be_bytes(rest[..8].try_into().unwrap());
    Ok((suite, capacity, &rest[8..]))
}

pub fn encode_semecs_public<G: Group>(suite: &Suite<G>, pk: &SemecsPublicKey<G>) -> Vec<u8> {
    let mut out = public_prefix(suite, SchemeTag::Semecs);
    out.extend_from_slice(&pk.capacity().to_be_bytes());
    out.extend_from_slice(&pk.payload_bytes(&suite.group));
    out
}

/// Parses a SEMECS public key and rebuilds its search index.
pub fn decode_semecs_public<G: Group>(bytes: &[u8]) -> Result<(Suite<G>, SemecsPublicKey<G>)> {
    let (suite, capacity, payload) = parse_ktime_public::<G>(bytes, SchemeTag::Semecs)?;
    let pk = SemecsPublicKey::from_payload(&suite.group, capacity, payload)?;
    Ok((suite, pk))
}

pub fn encode_eta_public<G: Group>(suite: &Suite<G>, pk: &EtaPublicKey<G>) -> Vec<u8> {
    let mut out = public_prefix(suite, SchemeTag::Eta);
    out.extend_from_slice(&pk.capacity().to_be_bytes());
    out.extend_from_slice(&suite.group.encode_element(&pk.public));
    for v in &pk.tokens {
        out.extend_from_slice(v);
    }
    out
}

pub fn decode_eta_public<G: Group>(bytes: &[u8]) -> Result<(Suite<G>, EtaPublicKey<G>)> {
    let (suite, capacity, payload) = parse_ktime_public::<G>(bytes, SchemeTag::Eta)?;
    let l = suite.scalar_len();
    let el = suite.group.element_len();
    let expected = usize::try_from(capacity)
        .ok()
        .and_then(|k| k.checked_mul(l))
        .and_then(|t| t.checked_add(el))
        .ok_or_else(|| Error::malformed("capacity overflows memory"))?;
    if capacity == 0 || payload.len() != expected {
        return Err(Error::malformed(format!("ETA public key payload must be {expected} octets")));
    }
    let public = suite.group.decode_element(&payload[..el])?;
    let tokens = payload[el..].chunks_exact(l).map(<[u8]>::to_vec).collect();
    Ok((suite, EtaPublicKey { public, tokens }))
}

pub fn encode_schnorr_public<G: Group>(suite: &Suite<G>, public: &G::Element) -> Vec<u8> {
    let mut out = public_prefix(suite, SchemeTag::Schnorr);
    out.extend_from_slice(&suite.group.encode_element(public));
    out
}

pub fn decode_schnorr_public<G: Group>(bytes: &[u8]) -> Result<(Suite<G>, G::Element)> {
    expect_header::<G>(bytes, SchemeTag::Schnorr, Role::Public)?;
    let (suite, used) = decode_suite::<G>(&bytes[HEADER_LEN..])?;
    let y = suite.group.decode_element(&bytes[HEADER_LEN + used..])?;
    Ok((suite, y))
}

// ---------------------------------------------------------------------------
// Search index

/// Permutation of `0..K` ordering the `β` values ascending.
pub fn build_search_index(betas: &[u8], scalar_len: usize) -> Result<Vec<u32>> {
    let beta = |j: u32| &betas[j as usize * scalar_len..(j as usize + 1) * scalar_len];
    let k = betas.len() / scalar_len;
    let mut order: Vec<u32> = (0..k as u32).collect();
    order.sort_unstable_by(|&a, &b| beta(a).cmp(beta(b)));
    if let Some(w) = order.windows(2).find(|w| beta(w[0]) == beta(w[1])) {
        let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
        return Err(Error::DuplicateBeta { first, second });
    }
    Ok(order)
}

// ---------------------------------------------------------------------------
// Files

/// Replaces `path` with `bytes` via a synced temporary file in the same
/// directory and a rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    // Make the rename itself durable. Not every platform can open a directory.
    if let Ok(dir) = File::open(parent) {
        let _ = dir.sync_all();
    }
    Ok(())
}

pub fn save_state(path: &Path, record: &SignerStateRecord) -> Result<()> {
    atomic_write(path, &record.to_bytes())
}

pub fn load_state(path: &Path) -> Result<SignerStateRecord> {
    SignerStateRecord::from_bytes(&fs::read(path)?)
}

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".lock");
    path.with_file_name(name)
}

/// Holds an exclusive advisory lock on the state file's sidecar while `f`
/// reads, checks, and rewrites the record.
fn with_state_lock<T>(path: &Path, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let lock = OpenOptions::new().create(true).truncate(false).write(true).open(lock_path(path))?;
    lock.lock()?;
    let out = f();
    let _ = lock.unlock();
    out
}

/// Compare-and-set on the stored counter: `expected_index → expected_index + 1`.
pub fn advance_counter(path: &Path, expected_index: u64) -> Result<()> {
    with_state_lock(path, || {
        let mut rec = load_state(path)?;
        if rec.index != expected_index {
            return Err(Error::StaleState { expected: expected_index, found: rec.index });
        }
        if rec.index >= rec.capacity {
            return Err(Error::KeyExhausted { capacity: rec.capacity });
        }
        rec.index += 1;
        save_state(path, &rec)
    })
}

/// Compare-and-set replacement of a whole record.
pub fn commit_record(path: &Path, expected_index: u64, next: &SignerStateRecord) -> Result<()> {
    with_state_lock(path, || {
        let current = load_state(path)?;
        if current.index != expected_index {
            return Err(Error::StaleState { expected: expected_index, found: current.index });
        }
        if current.header != next.header || current.capacity != next.capacity {
            return Err(Error::corrupt("replacement record describes a different key"));
        }
        save_state(path, next)
    })
}

/// A [`StateSink`] backed by a state file on disk.
#[derive(Clone, Debug)]
pub struct StateFile<G: Group> {
    path: PathBuf,
    suite: Suite<G>,
}

impl<G: Group> StateFile<G> {
    pub fn new(path: impl Into<PathBuf>, suite: Suite<G>) -> Self {
        StateFile { path: path.into(), suite }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl<G: Group> StateSink<SemecsSigningState<G>> for StateFile<G> {
    fn commit(&mut self, expected_index: u64, next: &SemecsSigningState<G>) -> Result<()> {
        debug_assert_eq!(next.index(), expected_index + 1);
        advance_counter(&self.path, expected_index)
    }
}

impl<G: Group> StateSink<EtaSigningState<G>> for StateFile<G> {
    fn commit(&mut self, expected_index: u64, next: &EtaSigningState<G>) -> Result<()> {
        commit_record(&self.path, expected_index, &eta_state_record(&self.suite, next))
    }
}

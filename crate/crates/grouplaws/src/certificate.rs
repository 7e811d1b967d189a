//! The law-certificate file format: a line-oriented UTF-8 record of what
//! was constructed, from which seed and parameters, and how it was
//! verified. The format is diff-friendly key:value text; an indented block
//! per verification record; the construction trace serialized as nested
//! nodes. Re-running the construction with the recorded seed and
//! parameters reproduces the word byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::group::GroupSpec;
use crate::laws::{LawKind, LawTrace};
use crate::word::Word;

pub const FORMAT_LINE: &str = "format: grouplaws-certificate 1";

/// Words whose text form exceeds this many bytes are stored as a SHA-256
/// digest plus length instead of inline text.
pub const WORD_TEXT_CAP: usize = 2048;

/// One verification block of a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct CertRecord {
    /// Group spec text, or `all-upto:n` for the quotient-oracle mode.
    pub group: String,
    /// `exhaustive`, `sampled:count`, or `oracle`.
    pub mode: String,
    pub pairs: u64,
    pub violations: u64,
    /// Element indices of the first violating pair, when sampling or
    /// exhaustion found one.
    pub witness: Option<(u64, u64)>,
    /// Seed recorded for sampled modes so failures are replayable.
    pub sample_seed: Option<u64>,
    /// Free-text witness description for oracle records.
    pub witness_note: Option<String>,
}

impl CertRecord {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Everything a certificate records besides the serialized trace.
#[derive(Clone, Debug, PartialEq)]
pub struct LawCertificate {
    pub created: u64,
    pub seed: u64,
    pub target: String,
    pub n: u64,
    pub c1: f64,
    pub c4: f64,
    pub bad_primes: Vec<u64>,
    pub retry_limit: u32,
    /// Walk length, pair count, rejected attempts when sampling ran.
    pub sampling: Option<(u64, u64, u64)>,
    pub scope: Vec<GroupSpec>,
    pub word: Word,
    pub records: Vec<CertRecord>,
}

impl LawCertificate {
    pub fn passed(&self) -> bool {
        self.records.iter().all(CertRecord::passed)
    }

    /// Full certificate text, with the construction trace serialized
    /// between the header and the verification blocks.
    pub fn render(&self, trace: &LawTrace) -> String {
        let mut lines = Vec::new();
        render_trace(trace, 1, &mut lines);
        let (key, value) = word_field(&self.word);
        self.render_with(&lines, key, &value, self.word.len())
    }

    fn render_with(
        &self,
        trace_lines: &[String],
        word_key: &str,
        word_value: &str,
        word_length: usize,
    ) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT_LINE}");
        let _ = writeln!(out, "created: {}", self.created);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "target: {}", self.target);
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "c1: {}", self.c1);
        let _ = writeln!(out, "c4: {}", self.c4);
        let _ = writeln!(out, "bad-primes: {}", join_or_none(&self.bad_primes));
        let _ = writeln!(out, "retry-limit: {}", self.retry_limit);
        if let Some((walk, pairs, rejected)) = self.sampling {
            let _ = writeln!(out, "walk-length: {walk}");
            let _ = writeln!(out, "pair-count: {pairs}");
            let _ = writeln!(out, "rejected-attempts: {rejected}");
        }
        let scope: Vec<String> = self.scope.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            out,
            "scope-groups: {}",
            if scope.is_empty() { "none".to_string() } else { scope.join(",") }
        );
        let _ = writeln!(out, "word-length: {word_length}");
        let _ = writeln!(out, "{word_key}: {word_value}");
        let _ = writeln!(out, "trace:");
        for line in trace_lines {
            let _ = writeln!(out, "{line}");
        }
        for record in &self.records {
            let _ = writeln!(out, "verification:");
            let _ = writeln!(out, "  group: {}", record.group);
            let _ = writeln!(out, "  mode: {}", record.mode);
            let _ = writeln!(out, "  pairs: {}", record.pairs);
            let _ = writeln!(out, "  violations: {}", record.violations);
            if let Some(seed) = record.sample_seed {
                let _ = writeln!(out, "  sample-seed: {seed}");
            }
            if let Some((a, b)) = record.witness {
                let _ = writeln!(out, "  witness: {a} {b}");
            }
            if let Some(note) = &record.witness_note {
                let _ = writeln!(out, "  witness-note: {note}");
            }
        }
        let _ = writeln!(out, "status: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn join_or_none(values: &[u64]) -> String {
    if values.is_empty() {
        "none".to_string()
    } else {
        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Inline text under the cap, digest above it.
fn word_field(word: &Word) -> (&'static str, String) {
    let text = word.to_string();
    if text.len() <= WORD_TEXT_CAP {
        ("word", text)
    } else {
        ("word-sha256", word_digest(word))
    }
}

/// Hex SHA-256 of the run-length text form.
pub fn word_digest(word: &Word) -> String {
    hex::encode(Sha256::digest(word.to_string().as_bytes()))
}

fn kind_name(kind: &LawKind) -> &'static str {
    match kind {
        LawKind::Atom => "atom",
        LawKind::AtomPower { .. } => "atom-power",
        LawKind::Union { .. } => "union",
        LawKind::Extension => "extension",
        LawKind::Solvable { .. } => "solvable",
        LawKind::Metabelian => "metabelian",
        LawKind::Substitution { .. } => "substitution",
    }
}

fn render_trace(trace: &LawTrace, depth: usize, lines: &mut Vec<String>) {
    let pad = "  ".repeat(depth);
    lines.push(format!("{pad}node: {}", kind_name(&trace.kind)));
    lines.push(format!("{pad}scope: {}", trace.scope));
    match &trace.kind {
        LawKind::AtomPower { exponent } => {
            lines.push(format!("{pad}exponent: {exponent}"));
        }
        LawKind::Union { c1, c2 } => {
            lines.push(format!("{pad}conjugator-1: {c1}"));
            lines.push(format!("{pad}conjugator-2: {c2}"));
        }
        LawKind::Substitution { u, v } => {
            lines.push(format!("{pad}image-x: {u}"));
            lines.push(format!("{pad}image-y: {v}"));
        }
        LawKind::Solvable { depth: d } => {
            lines.push(format!("{pad}depth: {d}"));
        }
        LawKind::Atom | LawKind::Extension | LawKind::Metabelian => {}
    }
    lines.push(format!("{pad}word-length: {}", trace.word.len()));
    let (key, value) = word_field(&trace.word);
    lines.push(format!("{pad}{key}: {value}"));
    for child in &trace.children {
        lines.push(format!("{pad}child:"));
        render_trace(child, depth + 1, lines);
    }
}

/// A certificate read back from text. The trace section is kept verbatim
/// so rendering the parse reproduces the input byte for byte.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedCertificate {
    pub certificate: LawCertificate,
    pub trace_lines: Vec<String>,
    /// Digest recorded in place of an over-cap word, if any.
    pub word_digest: Option<String>,
    pub stated_word_length: usize,
    pub stated_status: String,
}

impl ParsedCertificate {
    pub fn render(&self) -> String {
        match &self.word_digest {
            Some(digest) => self.certificate.render_with(
                &self.trace_lines,
                "word-sha256",
                digest,
                self.stated_word_length,
            ),
            None => self.certificate.render_with(
                &self.trace_lines,
                "word",
                &self.certificate.word.to_string(),
                self.stated_word_length,
            ),
        }
    }
}

pub fn parse_certificate(text: &str) -> Option<ParsedCertificate> {
    let mut lines = text.lines().peekable();
    if lines.next()? != FORMAT_LINE {
        return None;
    }
    let mut header = std::collections::BTreeMap::new();
    for line in lines.by_ref() {
        if line == "trace:" {
            break;
        }
        let (key, value) = line.split_once(": ")?;
        header.insert(key.to_string(), value.to_string());
    }
    let mut trace_lines = Vec::new();
    while let Some(line) = lines.peek() {
        if line.starts_with("  ") {
            trace_lines.push(lines.next()?.to_string());
        } else {
            break;
        }
    }
    let mut records = Vec::new();
    let mut status = None;
    while let Some(line) = lines.next() {
        if let Some(value) = line.strip_prefix("status: ") {
            status = Some(value.to_string());
            break;
        }
        if line != "verification:" {
            return None;
        }
        let mut fields = std::collections::BTreeMap::new();
        while let Some(next) = lines.peek() {
            let Some(body) = next.strip_prefix("  ") else {
                break;
            };
            let (key, value) = body.split_once(": ")?;
            fields.insert(key.to_string(), value.to_string());
            lines.next();
        }
        records.push(CertRecord {
            group: fields.get("group")?.clone(),
            mode: fields.get("mode")?.clone(),
            pairs: fields.get("pairs")?.parse().ok()?,
            violations: fields.get("violations")?.parse().ok()?,
            witness: match fields.get("witness") {
                Some(pair) => {
                    let (a, b) = pair.split_once(' ')?;
                    Some((a.parse().ok()?, b.parse().ok()?))
                }
                None => None,
            },
            sample_seed: match fields.get("sample-seed") {
                Some(v) => Some(v.parse().ok()?),
                None => None,
            },
            witness_note: fields.get("witness-note").cloned(),
        });
    }

    let parse_primes = |v: &str| -> Option<Vec<u64>> {
        if v == "none" {
            Some(Vec::new())
        } else {
            v.split(',').map(|p| p.parse().ok()).collect()
        }
    };
    let scope = match header.get("scope-groups")?.as_str() {
        "none" => Vec::new(),
        list => list
            .split(',')
            .map(|s| s.parse::<GroupSpec>().ok())
            .collect::<Option<Vec<_>>>()?,
    };
    let stated_word_length: usize = header.get("word-length")?.parse().ok()?;
    let (word, word_digest) = match header.get("word") {
        Some(text) => (text.parse::<Word>().ok()?, None),
        None => (Word::identity(), Some(header.get("word-sha256")?.clone())),
    };
    let sampling = match header.get("walk-length") {
        Some(walk) => Some((
            walk.parse().ok()?,
            header.get("pair-count")?.parse().ok()?,
            header.get("rejected-attempts")?.parse().ok()?,
        )),
        None => None,
    };

    Some(ParsedCertificate {
        certificate: LawCertificate {
            created: header.get("created")?.parse().ok()?,
            seed: header.get("seed")?.parse().ok()?,
            target: header.get("target")?.clone(),
            n: header.get("n")?.parse().ok()?,
            c1: header.get("c1")?.parse().ok()?,
            c4: header.get("c4")?.parse().ok()?,
            bad_primes: parse_primes(header.get("bad-primes")?)?,
            retry_limit: header.get("retry-limit")?.parse().ok()?,
            sampling,
            scope,
            word,
            records,
        },
        trace_lines,
        word_digest,
        stated_word_length,
        stated_status: status?,
    })
}

/// Creation timestamp: `SOURCE_DATE_EPOCH` when set (for reproducible
/// artifacts), otherwise the system clock.
pub fn creation_timestamp() -> u64 {
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(value) = epoch.parse() {
            return value;
        }
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Writes through a sibling temp file and renames into place, so readers
/// never observe a half-written certificate.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp_path = std::path::PathBuf::from(tmp);
    fs::write(&tmp_path, contents)?;
    fs::rename(&tmp_path, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws;

    fn sample_certificate() -> (LawCertificate, LawTrace) {
        let trace = laws::union_law(&["x^2".parse().unwrap(), "XYxy".parse().unwrap()]).unwrap();
        let cert = LawCertificate {
            created: 1_700_000_000,
            seed: 7,
            target: "psl2".to_string(),
            n: 660,
            c1: 8.0,
            c4: 4.0,
            bad_primes: vec![],
            retry_limit: 64,
            sampling: Some((52, 227, 3)),
            scope: vec![GroupSpec::Psl2(4), GroupSpec::Psl2(5)],
            word: trace.word.clone(),
            records: vec![
                CertRecord {
                    group: "PSL2:4".to_string(),
                    mode: "exhaustive".to_string(),
                    pairs: 3600,
                    violations: 0,
                    witness: None,
                    sample_seed: None,
                    witness_note: None,
                },
                CertRecord {
                    group: "PSL2:5".to_string(),
                    mode: "sampled:1000".to_string(),
                    pairs: 1000,
                    violations: 2,
                    witness: Some((17, 42)),
                    sample_seed: Some(7),
                    witness_note: None,
                },
            ],
        };
        (cert, trace)
    }

    #[test]
    fn renders_and_parses_byte_identically() {
        let (cert, trace) = sample_certificate();
        let text = cert.render(&trace);
        assert!(text.starts_with(FORMAT_LINE));
        assert!(text.ends_with("status: FAIL\n"));
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(parsed.render(), text);
        assert_eq!(parsed.certificate, cert);
        assert_eq!(parsed.stated_word_length, cert.word.len());
    }

    #[test]
    fn pass_status_requires_zero_violations() {
        let (mut cert, trace) = sample_certificate();
        cert.records.truncate(1);
        assert!(cert.passed());
        let text = cert.render(&trace);
        assert!(text.ends_with("status: PASS\n"));
    }

    #[test]
    fn giant_words_fall_back_to_digests() {
        let (mut cert, _) = sample_certificate();
        let big = Word::generator(crate::word::X)
            .concat(&Word::generator(crate::word::Y))
            .power(WORD_TEXT_CAP as u64);
        cert.word = big.clone();
        let trace = laws::LawTrace::atom(big.clone(), "giant").unwrap();
        let text = cert.render(&trace);
        assert!(!text.contains(&big.to_string()));
        assert!(text.contains(&format!("word-sha256: {}", word_digest(&big))));
        let parsed = parse_certificate(&text).unwrap();
        assert_eq!(parsed.word_digest, Some(word_digest(&big)));
        assert_eq!(parsed.stated_word_length, big.len());
        assert_eq!(parsed.render(), text);
    }

    #[test]
    fn trace_section_names_every_kind_it_contains() {
        let metabelian = laws::metabelian_law();
        let power = laws::power_law(60).unwrap();
        let union = laws::union_of_traces(vec![metabelian, power]).unwrap();
        let (mut cert, _) = sample_certificate();
        cert.word = union.word.clone();
        let text = cert.render(&union);
        for needle in ["node: union", "node: metabelian", "node: atom-power", "exponent: 60"] {
            assert!(text.contains(needle), "missing {needle}");
        }
    }

    #[test]
    fn atomic_write_replaces_whole_files() {
        let dir = std::env::temp_dir().join("grouplaws-cert-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.cert");
        write_atomic(&path, "first\n").unwrap();
        write_atomic(&path, "second\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second\n");
        assert!(!path.with_extension("cert.tmp").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}

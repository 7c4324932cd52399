//! Presentations with a diagonal cyclic action: the JSON document
//! format, the ASCII word grammar, relation character/degree detection
//! through truncated Magnus expansion, the three Euler characteristic
//! polynomials, and gocha series for cohomological dimension <= 2.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::groupring::{CharIndex, GroupRingElt, RingKind, RingMode};
use crate::inversion::is_prime_usize;
use crate::magnus::{magnus_expand, CommWord, NcMode, NcPoly};
use crate::series::{EqSeries, Series};
use crate::Rat;

/// Magnus truncation cap for degree detection; expansion starts at
/// 2 + the relation's nominal commutator length and doubles up to here.
const MAGNUS_TRUNC_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub char_index: CharIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// A group word over the generators.
    Word { text: String, ast: CommWord },
    /// Pre-resolved character and degree data, used by the arithmetic
    /// constructions where no word is available.
    Explicit { char_index: CharIndex, deg: usize, chi0_deg: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PresentationMeta {
    /// Caller assertion that the presentation is mild (cd <= 2).
    pub mild: bool,
    /// Caller assertion that the Zp-graded Lie algebra is torsion-free.
    pub torsion_free_zp: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationSpec {
    pub p: u64,
    pub q: usize,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub meta: PresentationMeta,
    /// Validation warnings collected while parsing (q not dividing p-1
    /// and the like); informational, never fatal.
    pub warnings: Vec<String>,
}

impl PresentationSpec {
    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    /// d^chi: generator count per character index.
    pub fn gen_counts_per_char(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.q];
        for g in &self.generators {
            d[g.char_index.0 % self.q] += 1;
        }
        d
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn has_word_relations_only(&self) -> bool {
        self.relations.iter().all(|r| matches!(r, Relation::Word { .. }))
    }
}

#[derive(Deserialize)]
struct RawDoc {
    p: u64,
    q: usize,
    generators: Vec<RawGen>,
    #[serde(default)]
    relations: Vec<RawRel>,
    #[serde(default)]
    meta: RawMeta,
}

#[derive(Deserialize)]
struct RawGen {
    name: String,
    #[serde(rename = "char")]
    char_index: i64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRel {
    Word { word: String },
    Explicit { #[serde(rename = "char")] char_index: i64, deg: usize, chi0_deg: usize },
}

#[derive(Deserialize, Default)]
struct RawMeta {
    #[serde(default)]
    mild: bool,
    #[serde(default)]
    torsion_free_zp: bool,
}

/// Parse and validate a presentation document.
pub fn parse_presentation(text: &str) -> Result<PresentationSpec> {
    let raw: RawDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("presentation JSON: {e}")))?;
    if raw.p < 3 || raw.p % 2 == 0 || !is_prime_usize(raw.p as usize) {
        return Err(Error::Parse(format!("p = {} is not an odd prime", raw.p)));
    }
    if raw.q < 1 {
        return Err(Error::Parse("q must be positive".into()));
    }
    let mut warnings = vec![];
    if raw.q > 2 && (raw.p - 1) % raw.q as u64 != 0 {
        warnings.push(format!(
            "q = {} does not divide p - 1 = {}; the semisimple eigenspace theory assumes it",
            raw.q,
            raw.p - 1
        ));
    }
    let mut generators = Vec::with_capacity(raw.generators.len());
    for g in &raw.generators {
        if generators.iter().any(|h: &Generator| h.name == g.name) {
            return Err(Error::Parse(format!("duplicate generator name '{}'", g.name)));
        }
        generators.push(Generator {
            name: g.name.clone(),
            char_index: CharIndex::new(g.char_index, raw.q),
        });
    }
    let names: Vec<&str> = generators.iter().map(|g| g.name.as_str()).collect();
    let mut relations = Vec::with_capacity(raw.relations.len());
    for (k, r) in raw.relations.into_iter().enumerate() {
        match r {
            RawRel::Word { word } => {
                let ast = parse_word(&word, &names)
                    .map_err(|e| Error::Parse(format!("relation {}: {e}", k + 1)))?;
                relations.push(Relation::Word { text: word, ast });
            }
            RawRel::Explicit { char_index, deg, chi0_deg } => {
                if deg < 2 {
                    return Err(Error::Parse(format!(
                        "relation {}: explicit degree {deg} < 2 contradicts minimality",
                        k + 1
                    )));
                }
                relations.push(Relation::Explicit {
                    char_index: CharIndex::new(char_index, raw.q),
                    deg,
                    chi0_deg,
                });
            }
        }
    }
    Ok(PresentationSpec {
        p: raw.p,
        q: raw.q,
        generators,
        relations,
        meta: PresentationMeta { mild: raw.meta.mild, torsion_free_zp: raw.meta.torsion_free_zp },
        warnings,
    })
}

/// Recursive-descent parser for the word grammar
/// word := name | "[" word "," word "]" | word "^" int | word "*" word | "(" word ")"
/// with "^" binding tighter than "*".
pub fn parse_word(text: &str, names: &[&str]) -> Result<CommWord> {
    let mut p = WordParser { src: text.as_bytes(), pos: 0, names };
    let w = p.parse_product()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!(
            "unexpected input at byte {} of word '{text}'",
            p.pos
        )));
    }
    Ok(w)
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl<'a> WordParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{}' at byte {}",
                c as char, self.pos
            )))
        }
    }

    fn parse_product(&mut self) -> Result<CommWord> {
        let mut w = self.parse_power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.parse_power()?;
            w = CommWord::Prod(Box::new(w), Box::new(rhs));
        }
        Ok(w)
    }

    fn parse_power(&mut self) -> Result<CommWord> {
        let mut w = self.parse_atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_int()?;
            w = CommWord::Pow(Box::new(w), e);
        }
        Ok(w)
    }

    fn parse_atom(&mut self) -> Result<CommWord> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_product()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.parse_product()?;
                self.expect(b',')?;
                let b = self.parse_product()?;
                self.expect(b']')?;
                Ok(CommWord::Comm(Box::new(a), Box::new(b)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.parse_name(),
            other => Err(Error::Parse(format!(
                "expected word at byte {}, found {:?}",
                self.pos,
                other.map(|c| c as char)
            ))),
        }
    }

    fn parse_name(&mut self) -> Result<CommWord> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match self.names.iter().position(|n| *n == name) {
            Some(i) => Ok(CommWord::Gen(i as u16)),
            None => Err(Error::Parse(format!(
                "unknown generator '{name}' at byte {start}"
            ))),
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse(format!("expected integer exponent at byte {start}")))
    }
}

/// Resolved leading data of one relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationDegrees {
    pub char_index: CharIndex,
    pub deg: usize,
    pub chi0_deg: usize,
}

/// Character and degrees of a relation: deg is the least total degree
/// with a nonzero Magnus coefficient, chi0_deg the least chi0-weight,
/// and the character comes from the minimal-degree form, which must be
/// character-homogeneous (eigenbasis relations).
pub fn relation_degrees(
    rel: &Relation,
    spec: &PresentationSpec,
    mode: RingMode,
    chi0_base: usize,
) -> Result<RelationDegrees> {
    let ast = match rel {
        Relation::Explicit { char_index, deg, chi0_deg } => {
            return Ok(RelationDegrees { char_index: *char_index, deg: *deg, chi0_deg: *chi0_deg });
        }
        Relation::Word { ast, .. } => ast,
    };
    let nc_mode = match mode.kind {
        RingKind::Fp => NcMode::Mod(mode.p),
        RingKind::Zp => NcMode::Exact,
    };
    let gen_chars: Vec<CharIndex> = spec.generators.iter().map(|g| g.char_index).collect();
    let mut trunc = (2 + ast.nominal_degree()).min(MAGNUS_TRUNC_CAP);
    loop {
        let u = magnus_expand(ast, trunc, nc_mode)?.sub_one();
        if let Some(found) = analyze_leading(&u, &gen_chars, spec.q, chi0_base, trunc)? {
            return Ok(found);
        }
        if trunc >= MAGNUS_TRUNC_CAP {
            return Err(Error::Inconclusive(format!(
                "relation expansion unresolved at truncation {MAGNUS_TRUNC_CAP}"
            )));
        }
        trunc = (trunc * 2).min(MAGNUS_TRUNC_CAP);
    }
}

fn word_char(word: &[u16], gen_chars: &[CharIndex], q: usize) -> usize {
    word.iter().map(|&g| gen_chars[g as usize].0).sum::<usize>() % q
}

fn word_weight(word: &[u16], gen_chars: &[CharIndex], q: usize, base: usize) -> Result<usize> {
    let mut w = 0;
    for &g in word {
        w += gen_chars[g as usize].weight_with_base(q, base)?;
    }
    Ok(w)
}

fn analyze_leading(
    u: &NcPoly,
    gen_chars: &[CharIndex],
    q: usize,
    chi0_base: usize,
    trunc: usize,
) -> Result<Option<RelationDegrees>> {
    let deg = match u.min_degree() {
        Some(d) => d,
        None => return Ok(None),
    };
    let mut char_index: Option<usize> = None;
    for (w, _) in u.terms() {
        if w.len() != deg {
            continue;
        }
        let c = word_char(w, gen_chars, q);
        match char_index {
            None => char_index = Some(c),
            Some(prev) if prev != c => {
                return Err(Error::Heterogeneous(format!(
                    "minimal-degree form (degree {deg}) mixes characters chi0^{prev} and chi0^{c}"
                )))
            }
            _ => {}
        }
    }
    let char_index = char_index.unwrap();
    let mut chi0_deg = usize::MAX;
    for (w, _) in u.terms() {
        chi0_deg = chi0_deg.min(word_weight(w, gen_chars, q, chi0_base)?);
    }
    // Unseen terms beyond the truncation have weight > trunc; the
    // minimum is certified only when it is within reach.
    if chi0_deg > trunc {
        return Ok(None);
    }
    // The chi0-leading character is chi0^{base * chi0_deg}; for an
    // eigenbasis relation it must agree with the standard one.
    let chi0_char = (chi0_base * chi0_deg) % q;
    if chi0_char != char_index {
        return Err(Error::Heterogeneous(format!(
            "standard-grading character chi0^{char_index} disagrees with \
             chi0-filtration character chi0^{chi0_char}"
        )));
    }
    Ok(Some(RelationDegrees { char_index: CharIndex(char_index), deg, chi0_deg }))
}

/// The three Euler characteristic polynomials and the degree numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerData {
    pub chi_eul: Series,
    pub chi_eul_star: EqSeries,
    pub chi_eul_chi0: Series,
    pub deg_g: usize,
    pub deg_chi0_g: usize,
    pub relation_degrees: Vec<RelationDegrees>,
}

pub fn euler_polys(spec: &PresentationSpec, mode: RingMode, chi0_base: usize) -> Result<EulerData> {
    let q = spec.q;
    let rel_degrees: Vec<RelationDegrees> = spec
        .relations
        .iter()
        .map(|r| relation_degrees(r, spec, mode, chi0_base))
        .collect::<Result<_>>()?;

    let d_total = spec.gen_count();
    let d_per_char = spec.gen_counts_per_char();
    let max_rel_deg = rel_degrees.iter().map(|r| r.deg).max().unwrap_or(0);
    let max_rel_chi0 = rel_degrees.iter().map(|r| r.chi0_deg).max().unwrap_or(0);

    let n_std = max_rel_deg.max(1);
    let mut chi_eul = vec![Rat::from_integer(0.into()); n_std + 1];
    chi_eul[0] = crate::rat(1);
    chi_eul[1] = -crate::rat(d_total as i64);
    let mut chi_eul_star = vec![GroupRingElt::zero(q); n_std + 1];
    chi_eul_star[0] = GroupRingElt::one(q);
    for (i, &d) in d_per_char.iter().enumerate() {
        if d > 0 {
            chi_eul_star[1] = chi_eul_star[1]
                .sub(&GroupRingElt::basis(q, i).scale(&crate::rat(d as i64)))?;
        }
    }

    let mut weight_cap = 1;
    for (i, &d) in d_per_char.iter().enumerate() {
        if d > 0 {
            weight_cap = weight_cap.max(CharIndex(i).weight_with_base(q, chi0_base)?);
        }
    }
    let n_chi0 = max_rel_chi0.max(weight_cap);
    let mut chi_eul_chi0 = vec![Rat::from_integer(0.into()); n_chi0 + 1];
    chi_eul_chi0[0] = crate::rat(1);
    for (i, &d) in d_per_char.iter().enumerate() {
        if d > 0 {
            let w = CharIndex(i).weight_with_base(q, chi0_base)?;
            chi_eul_chi0[w] -= crate::rat(d as i64);
        }
    }
    for r in &rel_degrees {
        chi_eul[r.deg] += crate::rat(1);
        chi_eul_star[r.deg] =
            chi_eul_star[r.deg].add(&GroupRingElt::basis(q, r.char_index.0))?;
        chi_eul_chi0[r.chi0_deg] += crate::rat(1);
    }

    let chi_eul = Series::from_coeffs(n_std, chi_eul);
    let chi_eul_star = EqSeries::from_coeffs(n_std, chi_eul_star);
    let chi_eul_chi0 = Series::from_coeffs(n_chi0, chi_eul_chi0);
    let deg_g = chi_eul.poly_degree();
    let deg_chi0_g = chi_eul_chi0.poly_degree();
    Ok(EulerData {
        chi_eul,
        chi_eul_star,
        chi_eul_chi0,
        deg_g,
        deg_chi0_g,
        relation_degrees: rel_degrees,
    })
}

/// The three gocha series of a cd <= 2 presentation.
#[derive(Debug, Clone, PartialEq)]
pub struct GochaSeries {
    pub gocha: Series,
    pub gocha_star: EqSeries,
    pub gocha_chi0: Series,
    pub euler: EulerData,
}

/// Invert the Euler polynomials to the requested truncation. Output is
/// identical in Fp and Zp mode whenever the degree data agree, which is
/// the torsion-free cd <= 2 situation. A negative coefficient in any of
/// the three expansions contradicts the mildness assertion and is an
/// error.
pub fn gocha_from_presentation(
    spec: &PresentationSpec,
    trunc: usize,
    mode: RingMode,
    chi0_base: usize,
) -> Result<GochaSeries> {
    let euler = euler_polys(spec, mode, chi0_base)?;
    let gocha = euler.chi_eul.retrunc(trunc).inv()?;
    let gocha_star = euler.chi_eul_star.retrunc(trunc).inv()?;
    let gocha_chi0 = euler.chi_eul_chi0.retrunc(trunc).inv()?;
    if !gocha.is_nonneg_integral() {
        return Err(Error::NegativeCoefficient(
            "gocha expansion has a negative coefficient within the truncation".into(),
        ));
    }
    if !gocha_star.is_nonneg_integral() {
        return Err(Error::NegativeCoefficient(
            "gocha_star expansion has a negative coefficient within the truncation".into(),
        ));
    }
    if !gocha_chi0.is_nonneg_integral() {
        return Err(Error::NegativeCoefficient(
            "gocha_chi0 expansion has a negative coefficient within the truncation".into(),
        ));
    }
    Ok(GochaSeries { gocha, gocha_star, gocha_chi0, euler })
}

/// Syntactic comm-family check: every relation must be a product of
/// integer powers of iterated commutators of generators, which
/// guarantees the relation subgroup is stable under the diagonal
/// action. A bare generator at top level only warns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommFamilyReport {
    pub all_comm: bool,
    pub notes: Vec<String>,
}

pub fn validate_comm_family(spec: &PresentationSpec) -> CommFamilyReport {
    let mut notes = vec![];
    for (k, rel) in spec.relations.iter().enumerate() {
        match rel {
            Relation::Explicit { .. } => {
                notes.push(format!("relation {}: explicit data, comm-family not checkable", k + 1));
            }
            Relation::Word { text, ast } => {
                if !is_comm_product(ast) {
                    notes.push(format!(
                        "relation {}: '{text}' is not a product of powers of iterated commutators",
                        k + 1
                    ));
                }
            }
        }
    }
    CommFamilyReport { all_comm: notes.is_empty(), notes }
}

fn is_comm_product(w: &CommWord) -> bool {
    match w {
        CommWord::Prod(a, b) => is_comm_product(a) && is_comm_product(b),
        CommWord::Pow(a, _) => is_comm_product(a),
        CommWord::Comm(_, _) => is_pure_comm(w),
        CommWord::Gen(_) => false,
    }
}

fn is_pure_comm(w: &CommWord) -> bool {
    match w {
        CommWord::Gen(_) => true,
        CommWord::Comm(a, b) => is_pure_comm(a) && is_pure_comm(b),
        _ => false,
    }
}

/// Degrees of degrees-agreement across modes, used by the consistency
/// tests: true when every relation resolves identically over Fp and Zp.
pub fn degrees_mode_independent(spec: &PresentationSpec, chi0_base: usize) -> Result<bool> {
    for rel in &spec.relations {
        let f = relation_degrees(rel, spec, RingMode::fp(spec.p), chi0_base)?;
        let z = relation_degrees(rel, spec, RingMode::zp(spec.p), chi0_base)?;
        if f != z {
            return Ok(false);
        }
    }
    Ok(true)
}

pub mod fixtures {
    //! Inline presentation documents used across the test suites.

    /// p = 103, q = 17, generators of characters chi0, chi0^2, chi0^3,
    /// one commutator relation.
    pub const EXAMPLE3: &str = r#"{
        "p": 103, "q": 17,
        "generators": [
            {"name": "x", "char": 1},
            {"name": "y", "char": 2},
            {"name": "z", "char": 3}
        ],
        "relations": [ {"word": "[x,y]"} ],
        "meta": {"mild": true, "torsion_free_zp": true}
    }"#;

    /// Three generators of characters chi0, chi0^2, chi0^3 with two
    /// commutator relations; q = 5, p = 11.
    pub const INTROEX: &str = r#"{
        "p": 11, "q": 5,
        "generators": [
            {"name": "x1", "char": 1},
            {"name": "x2", "char": 2},
            {"name": "x3", "char": 3}
        ],
        "relations": [ {"word": "[x1,x2]"}, {"word": "[x1,x3]"} ],
        "meta": {"mild": true, "torsion_free_zp": true}
    }"#;

    /// Free of rank 2 with mixed action at q = 2 (p = 5 so degree-3
    /// ranks are p-free).
    pub const FREE2_MIXED: &str = r#"{
        "p": 5, "q": 2,
        "generators": [
            {"name": "x", "char": 0},
            {"name": "y", "char": 1}
        ],
        "relations": [],
        "meta": {"mild": true, "torsion_free_zp": true}
    }"#;

    /// Free of rank `d` with every generator of character chi0, q = 2.
    pub fn free_chi0(d: usize) -> String {
        let gens: Vec<String> = (1..=d)
            .map(|j| format!("{{\"name\": \"x{j}\", \"char\": 1}}"))
            .collect();
        format!(
            "{{\"p\": 5, \"q\": 2, \"generators\": [{}], \"relations\": [], \
             \"meta\": {{\"mild\": true, \"torsion_free_zp\": true}}}}",
            gens.join(", ")
        )
    }
}

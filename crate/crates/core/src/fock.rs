//! Heisenberg Fock spaces `π^{⊗r}` with exact mode, quadratic and Virasoro actions.
//!
//! A basis vector is a list of `r` partitions, one per channel; the partition
//! `[3,1,1]` in a channel stands for `b_{-3} b_{-1} b_{-1} |0>`. Creation `b_{-m}`
//! appends a part with coefficient 1, annihilation `b_m` multiplies by
//! `m * (multiplicity of m)` and removes one part, so `[b_m, b_n] = m δ_{m+n,0}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quad::QuadraticElement;
use crate::scalar::{self, int, Rational};

/// Parts in weakly decreasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, m: u32) -> usize {
        self.0.iter().filter(|&&p| p == m).count()
    }

    fn with_part(&self, m: u32) -> Self {
        let mut parts = self.0.clone();
        let pos = parts.iter().position(|&p| p < m).unwrap_or(parts.len());
        parts.insert(pos, m);
        Self(parts)
    }

    fn without_part(&self, m: u32) -> Option<Self> {
        let pos = self.0.iter().position(|&p| p == m)?;
        let mut parts = self.0.clone();
        parts.remove(pos);
        Some(Self(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Partitions of `n` in reverse lexicographic order: `[4], [3,1], [2,2], [2,1,1], [1,1,1,1]`.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// One partition per channel.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Vec<Partition>);

impl Label {
    pub fn vacuum(rank: usize) -> Self {
        Self(vec![Partition::empty(); rank])
    }

    pub fn new(parts: Vec<Partition>) -> Self {
        Self(parts)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn channels(&self) -> &[Partition] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(Partition::size).sum()
    }

    fn replace(&self, channel: usize, p: Partition) -> Self {
        let mut out = self.0.clone();
        out[channel] = p;
        Self(out)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join("|"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse Fock vector: {0}")]
pub struct ParseFockError(String);

fn parse_partition(s: &str) -> std::result::Result<Partition, ParseFockError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseFockError(format!("expected [..], got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Partition::empty());
    }
    let parts = inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| ParseFockError(format!("bad part {p:?}")))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if parts.contains(&0) {
        return Err(ParseFockError("parts must be positive".into()));
    }
    Ok(Partition::new(parts))
}

impl FromStr for Label {
    type Err = ParseFockError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts = inner
                .split('|')
                .map(parse_partition)
                .collect::<std::result::Result<_, _>>()?;
            Ok(Self(parts))
        } else {
            Ok(Self(vec![parse_partition(s)?]))
        }
    }
}

/// All labels of total degree `d` in rank `r`, in canonical order: the first
/// channel's size descends, then partitions in reverse lexicographic order.
pub fn graded_basis(d: u32, r: usize) -> Vec<Label> {
    if r == 0 {
        return if d == 0 {
            vec![Label(Vec::new())]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for k in (0..=d).rev() {
        for p in partitions(k) {
            for rest in graded_basis(d - k, r - 1) {
                let mut v = vec![p.clone()];
                v.extend(rest.0);
                out.push(Label(v));
            }
        }
    }
    out
}

/// A finite rational combination of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    rank: usize,
    terms: BTreeMap<Label, Rational>,
}

impl FockVector {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::basis(Label::vacuum(rank))
    }

    pub fn basis(label: Label) -> Self {
        let rank = label.rank();
        let mut terms = BTreeMap::new();
        terms.insert(label, Rational::one());
        Self { rank, terms }
    }

    /// Rank-one basis vector `b_{-p1} b_{-p2} ... |0>`.
    pub fn from_parts(parts: &[u32]) -> Self {
        Self::basis(Label(vec![Partition::new(parts.to_vec())]))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Label, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, label: &Label) -> Rational {
        self.terms
            .get(label)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, label: Label, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(label.clone())
            .or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&label);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(l, v)| (l.clone(), v * c)).collect(),
        }
    }

    /// `Some(d)` if every term has degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        let mut degs = self.terms.keys().map(Label::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<u64> {
        self.terms.keys().map(Label::degree).max()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, c)| json!({ "label": l.to_string(), "coeff": scalar::format(c) }))
            .collect();
        json!({ "rank": self.rank, "terms": terms })
    }

    pub fn from_json(v: &Value) -> std::result::Result<Self, ParseFockError> {
        let bad = |m: &str| ParseFockError(m.to_string());
        let rank = v["rank"].as_u64().ok_or_else(|| bad("missing rank"))? as usize;
        let mut out = Self::zero(rank);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let label: Label = t["label"]
                .as_str()
                .ok_or_else(|| bad("missing label"))?
                .parse()?;
            if label.rank() != rank {
                return Err(bad("label rank differs from vector rank"));
            }
            let c = scalar::parse(t["coeff"].as_str().ok_or_else(|| bad("missing coeff"))?)
                .ok_or_else(|| bad("bad coefficient"))?;
            out.add_term(label, c);
        }
        Ok(out)
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-Rational::one()))
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{l}")?;
            } else {
                write!(f, "{}*{l}", scalar::format(&mag))?;
            }
        }
        Ok(())
    }
}

impl FromStr for FockVector {
    type Err = ParseFockError;

    /// Parses `c*label + c*label - label ...`; `0` is the zero vector of rank 1.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(1));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        let mut negative = false;
        for ch in s.chars() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth = depth.saturating_sub(1),
                _ => {}
            }
            if depth == 0 && (ch == '+' || ch == '-') && !cur.trim().ends_with('/') {
                if !cur.trim().is_empty() {
                    pieces.push((negative, std::mem::take(&mut cur)));
                } else if !cur.is_empty() || !pieces.is_empty() {
                    cur.clear();
                }
                negative = ch == '-';
                continue;
            }
            cur.push(ch);
        }
        if cur.trim().is_empty() {
            return Err(ParseFockError("dangling sign".into()));
        }
        pieces.push((negative, cur));

        let mut out: Option<Self> = None;
        for (neg, piece) in pieces {
            let piece = piece.trim();
            let (coeff, label) = match piece.split_once('*') {
                Some((c, l)) => (
                    scalar::parse(c.trim())
                        .ok_or_else(|| ParseFockError(format!("bad coefficient {c:?}")))?,
                    l,
                ),
                None => (Rational::one(), piece),
            };
            let label: Label = label.parse()?;
            let coeff = if neg { -coeff } else { coeff };
            let v = out.get_or_insert_with(|| Self::zero(label.rank()));
            if v.rank != label.rank() {
                return Err(ParseFockError("labels of different rank".into()));
            }
            v.add_term(label, coeff);
        }
        Ok(out.expect("at least one piece"))
    }
}

/// `π^{⊗r}` with the distinguished embedding `π -> V` into channel `embedding`
/// (1-based). `lowest_weight` only tags Fock-type modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoaConfig {
    rank: usize,
    embedding: usize,
    lowest_weight: Option<String>,
}

impl VoaConfig {
    pub fn new(rank: usize, embedding: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameters("rank must be positive".into()));
        }
        if embedding == 0 || embedding > rank {
            return Err(Error::Channel {
                channel: embedding,
                rank,
            });
        }
        Ok(Self {
            rank,
            embedding,
            lowest_weight: None,
        })
    }

    pub fn heisenberg(rank: usize) -> Result<Self> {
        Self::new(rank, 1)
    }

    pub fn with_lowest_weight(mut self, tag: impl Into<String>) -> Self {
        self.lowest_weight = Some(tag.into());
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn embedding(&self) -> usize {
        self.embedding
    }

    pub fn lowest_weight(&self) -> Option<&str> {
        self.lowest_weight.as_deref()
    }
}

fn check_channel(channel: usize, rank: usize) -> Result<usize> {
    if channel == 0 || channel > rank {
        return Err(Error::Channel { channel, rank });
    }
    Ok(channel - 1)
}

/// `b_n` on a single basis vector in channel index `ch` (0-based).
fn mode_on_label(n: i64, ch: usize, label: &Label) -> Option<(Label, Rational)> {
    let p = &label.0[ch];
    if n < 0 {
        let m = u32::try_from(-n).ok()?;
        Some((label.replace(ch, p.with_part(m)), Rational::one()))
    } else {
        let m = u32::try_from(n).ok()?;
        let mult = p.multiplicity(m);
        if mult == 0 {
            return None;
        }
        let q = p.without_part(m)?;
        Some((label.replace(ch, q), int(n) * int(mult as i64)))
    }
}

/// `b_n` acting in `channel` (1-based).
pub fn apply_mode(n: i64, channel: usize, v: &FockVector) -> Result<FockVector> {
    if n == 0 {
        return Err(Error::ZeroMode);
    }
    let ch = check_channel(channel, v.rank)?;
    let mut out = FockVector::zero(v.rank);
    for (l, c) in &v.terms {
        if let Some((l2, f)) = mode_on_label(n, ch, l) {
            out.add_term(l2, c * f);
        }
    }
    Ok(out)
}

/// `:b_a b_b:` with `a <= b` on one basis vector: `b_b` acts first.
fn pair_on_label(a: i64, b: i64, ch: usize, label: &Label) -> Option<(Label, Rational)> {
    let (l1, f1) = mode_on_label(b, ch, label)?;
    let (l2, f2) = mode_on_label(a, ch, &l1)?;
    Some((l2, f1 * f2))
}

/// `A` acting in `channel` (1-based): central part as a scalar, linear part
/// through modes, each diagonal through the finitely many terms whose
/// annihilation index does not exceed the largest part present.
pub fn apply_quadratic(a: &QuadraticElement, v: &FockVector, channel: usize) -> Result<FockVector> {
    let ch = check_channel(channel, v.rank)?;
    let mut out = v.scale(a.central_part());
    for (m, fm) in a.linear_part().terms() {
        for (l, c) in &v.terms {
            if let Some((l2, f)) = mode_on_label(m, ch, l) {
                out.add_term(l2, c * fm * f);
            }
        }
    }
    for (d, _) in a.diagonals() {
        for (l, c) in &v.terms {
            let largest = l.0[ch].largest() as i64;
            // annihilator b > 0 on the right, a = d - b <= b
            for b in 1..=largest {
                let x = d - b;
                if x == 0 || x > b {
                    continue;
                }
                let coef = a.pair_coefficient(x, b);
                if coef.is_zero() {
                    continue;
                }
                if let Some((l2, f)) = pair_on_label(x, b, ch, l) {
                    out.add_term(l2, c * &coef * f);
                }
            }
            // two creators: x <= b < 0
            if d <= -2 {
                for b in -((-d) / 2)..=-1 {
                    let x = d - b;
                    if x > b {
                        continue;
                    }
                    let coef = a.pair_coefficient(x, b);
                    if coef.is_zero() {
                        continue;
                    }
                    if let Some((l2, f)) = pair_on_label(x, b, ch, l) {
                        out.add_term(l2, c * &coef * f);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `A` acting through the distinguished embedding of `config`.
pub fn apply_embedded(
    config: &VoaConfig,
    a: &QuadraticElement,
    v: &FockVector,
) -> Result<FockVector> {
    if v.rank != config.rank {
        return Err(Error::RankMismatch(config.rank, v.rank));
    }
    apply_quadratic(a, v, config.embedding)
}

/// `L_p = τ̂(L_p)` in one channel.
pub fn virasoro(p: i64, v: &FockVector, channel: usize) -> Result<FockVector> {
    apply_quadratic(&QuadraticElement::tau_hat(p), v, channel)
}

/// `L_p` summed over all channels (the conformal vector of `π^{⊗r}`).
pub fn virasoro_total(p: i64, v: &FockVector) -> Result<FockVector> {
    let mut out = FockVector::zero(v.rank);
    for ch in 1..=v.rank {
        out = out.try_add(&virasoro(p, v, ch)?)?;
    }
    Ok(out)
}

/// Which Virasoro field `measure_central_charge` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VirasoroField {
    Channel(usize),
    Total,
}

fn virasoro_field(field: VirasoroField, p: i64, v: &FockVector) -> Result<FockVector> {
    match field {
        VirasoroField::Channel(ch) => virasoro(p, v, ch),
        VirasoroField::Total => virasoro_total(p, v),
    }
}

/// The unique `c` with `([L_p, L_{-p}] - 2p L_0) v = c/12 (p^3 - p) v` for every test vector.
pub fn measure_central_charge(
    p: i64,
    vectors: &[FockVector],
    field: VirasoroField,
) -> Result<Rational> {
    if (-1..=1).contains(&p) {
        return Err(Error::InvalidParameters(format!(
            "p = {p} carries no central term"
        )));
    }
    if vectors.is_empty() {
        return Err(Error::InvalidParameters("no test vectors".into()));
    }
    let factor = int(p * p * p - p) / int(12);
    let mut found: Option<(Rational, String)> = None;
    for v in vectors {
        if v.is_zero() {
            continue;
        }
        let lp_lm = virasoro_field(field, p, &virasoro_field(field, -p, v)?)?;
        let lm_lp = virasoro_field(field, -p, &virasoro_field(field, p, v)?)?;
        let l0 = virasoro_field(field, 0, v)?;
        let w = lp_lm.try_sub(&lm_lp)?.try_sub(&l0.scale(&int(2 * p)))?;
        let (lead, lc) = v.terms.iter().next().expect("nonzero");
        let lambda = w.coeff(lead) / lc;
        if w != v.scale(&lambda) {
            return Err(Error::InconsistentCentralCharge(format!(
                "{v} is not an eigenvector"
            )));
        }
        let c = lambda / &factor;
        match &found {
            None => found = Some((c, v.to_string())),
            Some((c0, w0)) if *c0 != c => {
                return Err(Error::InconsistentCentralCharge(format!(
                    "c = {} on {w0} but c = {} on {v}",
                    scalar::format(c0),
                    scalar::format(&c)
                )))
            }
            _ => {}
        }
    }
    found
        .map(|(c, _)| c)
        .ok_or_else(|| Error::InvalidParameters("all test vectors are zero".into()))
}

/// Eigenvalue of the offset-0 part of `a` on a basis vector: `sum_i c(-i,i) i m_i`.
fn number_eigenvalue(a: &QuadraticElement, p: &Partition) -> Rational {
    let mut acc = Rational::zero();
    let mut prev = 0;
    for &i in p.parts() {
        if i == prev {
            continue;
        }
        prev = i;
        let i = i as i64;
        acc += a.pair_coefficient(-i, i) * int(i) * int(p.multiplicity(i as u32) as i64);
    }
    acc
}

/// `exp(A) v`.
///
/// Two cases are supported. If every diagonal of `A` has positive offset and the
/// linear part only has annihilators, `A` lowers degree and the series
/// terminates. If `A` is a combination of number operators, it acts on each
/// basis vector by the integer eigenvalue `k` and `exp(A)` is taken to be
/// multiplication by `group^k`.
pub fn exp_apply(
    a: &QuadraticElement,
    v: &FockVector,
    channel: usize,
    group: Option<&Rational>,
) -> Result<FockVector> {
    check_channel(channel, v.rank)?;
    if a.is_zero() {
        return Ok(v.clone());
    }
    if !a.central_part().is_zero() {
        return Err(Error::NotNilpotent("central part".into()));
    }
    let offsets: Vec<i64> = a.diagonals().map(|(d, _)| d).collect();
    let lowering =
        offsets.iter().all(|&d| d > 0) && a.linear_part().min_exponent().is_none_or(|m| m > 0);
    if lowering {
        let mut out = v.clone();
        let mut term = v.clone();
        let mut k = 1i64;
        loop {
            term = apply_quadratic(a, &term, channel)?.scale(&(Rational::one() / int(k)));
            if term.is_zero() {
                return Ok(out);
            }
            out = out.try_add(&term)?;
            k += 1;
        }
    }
    if offsets == [0] && a.linear_part().is_zero() {
        let g = group.ok_or(Error::MissingGroupScalar)?;
        let ch = channel - 1;
        let mut out = FockVector::zero(v.rank);
        for (l, c) in &v.terms {
            let e = number_eigenvalue(a, &l.0[ch]);
            let k = scalar::to_i64(&e).ok_or_else(|| Error::NonIntegralEigenvalue(e.clone()))?;
            out.add_term(l.clone(), c * scalar::pow(g, k));
        }
        return Ok(out);
    }
    let raising: Vec<String> = offsets
        .iter()
        .filter(|&&d| d <= 0)
        .map(|d| d.to_string())
        .collect();
    Err(Error::NotNilpotent(if raising.is_empty() {
        "linear part contains a creation mode".into()
    } else {
        format!("diagonal offsets {} do not lower degree", raising.join(","))
    }))
}

/// Checks that `:b_{-i} b_i:` is diagonal with eigenvalue `i m_i` on every basis
/// vector of degree at most `max_degree`, for `i <= max_i`, in every channel.
pub fn check_admissibility(rank: usize, max_i: i64, max_degree: u32) -> Result<()> {
    for d in 0..=max_degree {
        for label in graded_basis(d, rank) {
            let v = FockVector::basis(label.clone());
            for ch in 1..=rank {
                for i in 1..=max_i {
                    let w = apply_quadratic(&QuadraticElement::number_operator(i), &v, ch)?;
                    let expected = int(i) * int(label.0[ch - 1].multiplicity(i as u32) as i64);
                    if w != v.scale(&expected) {
                        let lambda = w.coeff(&label);
                        return Err(Error::NonIntegralEigenvalue(lambda));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Basis vectors of all degrees up to `max_degree`.
pub fn basis_up_to(max_degree: u32, rank: usize) -> Vec<FockVector> {
    (0..=max_degree)
        .flat_map(|d| graded_basis(d, rank))
        .map(FockVector::basis)
        .collect()
}

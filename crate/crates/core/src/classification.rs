//! Verdicts for family members and their flat JSON/TSV record form.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::numth::BigNat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_residue(r: u64) -> Self {
        if r.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Only one direction is ever proved: there is no `Cayley` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    NonCayley,
    Unresolved,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NonCayley => "NonCayley",
            Verdict::Unresolved => "Unresolved",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which argument backs a `NonCayley` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremTag {
    /// `C(n,k)` even and `n` odd: every involution fixes a `k`-subset.
    KneserOddN,
    /// `C(n,k)` even and `n`, `k` both even.
    KneserEvenNK,
    /// The odd graph has even order.
    EvenOddGraph,
    /// Even `k > 4` with `4 | C(2k+1,k)`: the line graph has even order and
    /// every involution fixes an edge.
    LineOfOddMod4,
    None,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::KneserOddN => "kneser-odd-n",
            TheoremTag::KneserEvenNK => "kneser-even-n-even-k",
            TheoremTag::EvenOddGraph => "even-odd-graph",
            TheoremTag::LineOfOddMod4 => "line-of-odd-mod4",
            TheoremTag::None => "none",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for TheoremTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Kneser { n: u64, k: u64 },
    /// `O_{k+1} = K(2k+1, k)`.
    Odd { k: u64 },
    /// Line graph of `O_{k+1}`.
    LineOfOdd { k: u64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Kneser { .. } => "kneser",
            Family::Odd { .. } => "odd",
            Family::LineOfOdd { .. } => "line-odd",
        }
    }

    /// Ground-set size of the underlying Kneser graph.
    pub fn n(&self) -> u64 {
        match *self {
            Family::Kneser { n, .. } => n,
            Family::Odd { k } | Family::LineOfOdd { k } => 2 * k + 1,
        }
    }

    pub fn k(&self) -> u64 {
        match *self {
            Family::Kneser { k, .. } | Family::Odd { k } | Family::LineOfOdd { k } => k,
        }
    }
}

/// A classified family member.
///
/// `order` is the vertex count of the classified graph itself (the line graph
/// for [`Family::LineOfOdd`]). `evidence` lists every fact the verdict rests
/// on, each one computed rather than assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub family: Family,
    pub order: BigNat,
    pub parity: Parity,
    pub verdict: Verdict,
    pub theorem_tag: TheoremTag,
    pub evidence: Vec<String>,
}

impl Classification {
    pub const TSV_HEADER: [&'static str; 8] = [
        "family",
        "n",
        "k",
        "order",
        "parity",
        "verdict",
        "theorem_tag",
        "evidence",
    ];

    pub fn record(&self) -> ClassificationRecord {
        ClassificationRecord {
            family: self.family.name(),
            n: self.family.n(),
            k: self.family.k(),
            order: self.order.to_string(),
            parity: self.parity,
            verdict: self.verdict,
            theorem_tag: self.theorem_tag,
            evidence: self.evidence.join("; "),
        }
    }

    /// Row matching [`Self::TSV_HEADER`], without trailing newline.
    pub fn tsv_row(&self) -> String {
        self.record().tsv_fields().join("\t")
    }
}

/// The flat record shared by the JSON and TSV renderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationRecord {
    pub family: &'static str,
    pub n: u64,
    pub k: u64,
    pub order: String,
    pub parity: Parity,
    pub verdict: Verdict,
    pub theorem_tag: TheoremTag,
    pub evidence: String,
}

impl ClassificationRecord {
    pub fn tsv_fields(&self) -> [String; 8] {
        [
            self.family.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.order.clone(),
            self.parity.to_string(),
            self.verdict.to_string(),
            self.theorem_tag.to_string(),
            self.evidence.replace(['\t', '\n'], " "),
        ]
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

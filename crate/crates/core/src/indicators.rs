//! Bibliometric data model and the highly-cited-paper indicator.
//!
//! A publication is *highly cited* when it sits in the top `p` fraction of its
//! (subject category, publication year) group by citation count. Ties at the
//! threshold are all included: a publication qualifies iff fewer than
//! `ceil(p * N)` publications of its group have strictly more citations. The
//! number of qualifying publications in a group can therefore exceed `p * N`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default top fraction for the highly-cited indicator.
pub const DEFAULT_TOP_FRACTION: f64 = 0.10;

/// Indicator written by [`score_highly_cited`].
pub const HIGHLY_CITED: &str = "highly_cited_papers";
/// Number of included articles and reviews.
pub const PUBLICATIONS: &str = "publications";
/// Citations summed over included articles and reviews.
pub const CITATIONS: &str = "citations";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocType {
    Article,
    Review,
    Other,
}

impl DocType {
    /// Only articles and reviews count towards indicators.
    pub fn is_citable(self) -> bool {
        matches!(self, DocType::Article | DocType::Review)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::Other => "other",
        }
    }
}

impl FromStr for DocType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "article" => Ok(DocType::Article),
            "review" => Ok(DocType::Review),
            "other" => Ok(DocType::Other),
            _ => Err(format!(
                "unknown doc_type `{s}` (expected article, review or other)"
            )),
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Validation {
    Pending,
    Included,
    Excluded,
}

impl Validation {
    pub fn as_str(self) -> &'static str {
        match self {
            Validation::Pending => "pending",
            Validation::Included => "included",
            Validation::Excluded => "excluded",
        }
    }
}

impl FromStr for Validation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pending" => Ok(Validation::Pending),
            "included" => Ok(Validation::Included),
            "excluded" => Ok(Validation::Excluded),
            _ => Err(format!(
                "unknown validation status `{s}` (expected pending, included or excluded)"
            )),
        }
    }
}

/// Outcome of validating a single publication with the applicant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Included,
    Excluded,
}

impl From<Verdict> for Validation {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Included => Validation::Included,
            Verdict::Excluded => Validation::Excluded,
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "included" => Ok(Verdict::Included),
            "excluded" => Ok(Verdict::Excluded),
            _ => Err(format!(
                "unknown decision `{s}` (expected included or excluded)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub category: String,
    pub citations: u64,
    pub doc_type: DocType,
    pub validated: Validation,
}

impl Publication {
    /// An included publication, as found in a reference corpus.
    pub fn new(
        id: impl Into<String>,
        year: i32,
        category: impl Into<String>,
        citations: u64,
        doc_type: DocType,
    ) -> Self {
        Publication {
            id: id.into(),
            year,
            category: category.into(),
            citations,
            doc_type,
            validated: Validation::Included,
        }
    }

    pub fn with_validation(mut self, validated: Validation) -> Self {
        self.validated = validated;
        self
    }

    /// Included and of a citable document type.
    pub fn counts(&self) -> bool {
        self.validated == Validation::Included && self.doc_type.is_citable()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupKey {
    pub category: String,
    pub year: i32,
}

/// Citation distributions of the reference population, one per
/// (category, year) group. Excluded publications never enter a group.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceCorpus {
    // Citation counts sorted ascending; every stored group is non-empty.
    groups: BTreeMap<GroupKey, Vec<u64>>,
    len: usize,
}

impl ReferenceCorpus {
    pub fn new<I>(publications: I) -> Self
    where
        I: IntoIterator<Item = Publication>,
    {
        let mut groups: BTreeMap<GroupKey, Vec<u64>> = BTreeMap::new();
        let mut len = 0;
        for p in publications {
            if p.validated == Validation::Excluded {
                continue;
            }
            len += 1;
            groups
                .entry(GroupKey {
                    category: p.category,
                    year: p.year,
                })
                .or_default()
                .push(p.citations);
        }
        for citations in groups.values_mut() {
            citations.sort_unstable();
        }
        ReferenceCorpus { groups, len }
    }

    /// Sorted citation counts of a group.
    pub fn group(&self, category: &str, year: i32) -> Option<&[u64]> {
        // BTreeMap lookups need an owned key; groups are few so this is fine.
        self.groups
            .get(&GroupKey {
                category: category.to_owned(),
                year,
            })
            .map(Vec::as_slice)
    }

    pub fn groups(&self) -> impl Iterator<Item = (&GroupKey, &[u64])> {
        self.groups.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl FromIterator<Publication> for ReferenceCorpus {
    fn from_iter<T: IntoIterator<Item = Publication>>(iter: T) -> Self {
        ReferenceCorpus::new(iter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

impl Direction {
    /// `Greater` when `a` is the better score.
    pub fn compare(self, a: f64, b: f64) -> std::cmp::Ordering {
        match self {
            Direction::HigherIsBetter => a.total_cmp(&b),
            Direction::LowerIsBetter => b.total_cmp(&a),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::HigherIsBetter => "higher",
            Direction::LowerIsBetter => "lower",
        }
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "higher" | "higher_is_better" => Ok(Direction::HigherIsBetter),
            "lower" | "lower_is_better" => Ok(Direction::LowerIsBetter),
            _ => Err(format!(
                "unknown direction `{s}` (expected higher or lower)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndicatorDefinition {
    name: String,
    direction: Direction,
}

impl IndicatorDefinition {
    pub fn new(name: impl Into<String>, direction: Direction) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        Ok(IndicatorDefinition { name, direction })
    }

    pub fn higher(name: impl Into<String>) -> Result<Self> {
        Self::new(name, Direction::HigherIsBetter)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

impl fmt::Display for IndicatorDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::HigherIsBetter => f.write_str(&self.name),
            Direction::LowerIsBetter => write!(f, "{}:lower", self.name),
        }
    }
}

/// Parses `name` or `name:higher` / `name:lower`.
impl FromStr for IndicatorDefinition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.rsplit_once(':') {
            Some((name, dir)) => {
                let direction = dir
                    .trim()
                    .parse()
                    .map_err(|reason| Error::param("cue", reason))?;
                IndicatorDefinition::new(name.trim(), direction)
            }
            None => IndicatorDefinition::higher(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateProfile {
    pub id: String,
    pub publications: Vec<Publication>,
    indicators: BTreeMap<String, f64>,
}

impl CandidateProfile {
    pub fn new(id: impl Into<String>, publications: Vec<Publication>) -> Self {
        CandidateProfile {
            id: id.into(),
            publications,
            indicators: BTreeMap::new(),
        }
    }

    pub fn with_indicator(mut self, name: impl Into<String>, value: f64) -> Result<Self> {
        self.set_indicator(name, value)?;
        Ok(self)
    }

    /// Sets or replaces an indicator score.
    pub fn set_indicator(&mut self, name: impl Into<String>, value: f64) -> Result<()> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::EmptyName);
        }
        if !value.is_finite() {
            return Err(Error::NonFiniteCue {
                object: self.id.clone(),
                cue: name,
            });
        }
        self.indicators.insert(name, value);
        Ok(())
    }

    pub fn indicator(&self, name: &str) -> Option<f64> {
        self.indicators.get(name).copied()
    }

    pub fn indicators(&self) -> &BTreeMap<String, f64> {
        &self.indicators
    }

    pub fn pending_count(&self) -> usize {
        self.publications
            .iter()
            .filter(|p| p.validated == Validation::Pending)
            .count()
    }

    pub fn is_finalized(&self) -> bool {
        self.pending_count() == 0
    }
}

/// Applies validation verdicts to a profile's publication list. Pending
/// publications without a verdict default to included.
pub fn finalize_publication_list(
    profile: &CandidateProfile,
    decisions: &BTreeMap<String, Verdict>,
) -> Result<CandidateProfile> {
    if let Some(unknown) = decisions
        .keys()
        .find(|id| !profile.publications.iter().any(|p| &p.id == *id))
    {
        return Err(Error::UnknownPublication(unknown.clone()));
    }
    let mut out = profile.clone();
    for p in &mut out.publications {
        match decisions.get(&p.id) {
            Some(v) => p.validated = (*v).into(),
            None if p.validated == Validation::Pending => p.validated = Validation::Included,
            None => {}
        }
    }
    Ok(out)
}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: "(0, 1)",
        })
    }
}

/// `ceil(fraction * n)`, at least one. A 1e-9 slack absorbs products such as
/// `0.3 * 10 = 3.0000000000000004`.
pub(crate) fn quota(fraction: f64, n: usize) -> usize {
    let q = (fraction * n as f64 - 1e-9).ceil();
    (q.max(1.0) as usize).min(n.max(1))
}

pub fn is_highly_cited(pub_: &Publication, corpus: &ReferenceCorpus, p: f64) -> Result<bool> {
    check_open_unit("p", p)?;
    if pub_.validated != Validation::Included {
        return Err(Error::IneligiblePublication {
            id: pub_.id.clone(),
            reason: "publication is not validated as included",
        });
    }
    if !pub_.doc_type.is_citable() {
        return Err(Error::IneligiblePublication {
            id: pub_.id.clone(),
            reason: "only articles and reviews are classified",
        });
    }
    let group = corpus
        .group(&pub_.category, pub_.year)
        .ok_or_else(|| Error::MissingGroup {
            category: pub_.category.clone(),
            year: pub_.year,
        })?;
    let strictly_greater = group.len() - group.partition_point(|&c| c <= pub_.citations);
    Ok(strictly_greater < quota(p, group.len()))
}

pub fn count_highly_cited(
    profile: &CandidateProfile,
    corpus: &ReferenceCorpus,
    p: f64,
) -> Result<usize> {
    check_open_unit("p", p)?;
    let pending = profile.pending_count();
    if pending > 0 {
        return Err(Error::PendingPublications {
            candidate: profile.id.clone(),
            count: pending,
        });
    }
    let mut count = 0;
    for pub_ in profile.publications.iter().filter(|p| p.counts()) {
        if is_highly_cited(pub_, corpus, p)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Returns the profile with [`HIGHLY_CITED`] written back.
pub fn score_highly_cited(
    profile: &CandidateProfile,
    corpus: &ReferenceCorpus,
    p: f64,
) -> Result<CandidateProfile> {
    let count = count_highly_cited(profile, corpus, p)?;
    profile.clone().with_indicator(HIGHLY_CITED, count as f64)
}

/// Writes [`HIGHLY_CITED`], [`PUBLICATIONS`] and [`CITATIONS`].
pub fn score_profile(
    profile: &CandidateProfile,
    corpus: &ReferenceCorpus,
    p: f64,
) -> Result<CandidateProfile> {
    let mut out = score_highly_cited(profile, corpus, p)?;
    let counted = profile.publications.iter().filter(|p| p.counts());
    let (n, cites) = counted.fold((0u64, 0u64), |(n, c), p| (n + 1, c + p.citations));
    out.set_indicator(PUBLICATIONS, n as f64)?;
    out.set_indicator(CITATIONS, cites as f64)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn group(citations: &[u64]) -> (Vec<Publication>, ReferenceCorpus) {
        let pubs: Vec<_> = citations
            .iter()
            .enumerate()
            .map(|(i, &c)| Publication::new(format!("p{i}"), 2015, "Physics", c, DocType::Article))
            .collect();
        let corpus = ReferenceCorpus::new(pubs.clone());
        (pubs, corpus)
    }

    /// Rank each paper by brute force: 1 + number of strictly better papers.
    fn oracle_top(group: &[u64], c: u64, p: f64) -> bool {
        let rank = 1 + group.iter().filter(|&&x| x > c).count();
        let allowed = (p * group.len() as f64 - 1e-9).ceil().max(1.0) as usize;
        rank <= allowed
    }

    #[test]
    fn ten_distinct_counts() {
        let cites: Vec<u64> = (0..10).collect();
        let (pubs, corpus) = group(&cites);
        let flags: Vec<bool> = pubs
            .iter()
            .map(|p| is_highly_cited(p, &corpus, 0.10).unwrap())
            .collect();
        let oracle: Vec<bool> = cites.iter().map(|&c| oracle_top(&cites, c, 0.10)).collect();
        assert_eq!(flags, oracle);
        assert!(flags[9]);
        assert!(!flags[8]);
        assert_eq!(flags.iter().filter(|&&f| f).count(), 1);
    }

    #[test]
    fn all_ties_are_included() {
        let (pubs, corpus) = group(&[5; 10]);
        assert!(pubs
            .iter()
            .all(|p| is_highly_cited(p, &corpus, 0.10).unwrap()));
    }

    #[test]
    fn singleton_group() {
        let (pubs, corpus) = group(&[0]);
        assert!(is_highly_cited(&pubs[0], &corpus, 0.10).unwrap());
    }

    #[test]
    fn quota_ceiling_is_stable() {
        assert_eq!(quota(0.1, 10), 1);
        assert_eq!(quota(0.3, 10), 3);
        assert_eq!(quota(0.4, 5), 2);
        assert_eq!(quota(0.1, 11), 2);
        assert_eq!(quota(1.0, 1), 1);
        assert_eq!(quota(0.01, 3), 1);
    }

    #[test]
    fn missing_group_and_bad_fraction() {
        let (_, corpus) = group(&[1, 2]);
        let stray = Publication::new("x", 1999, "Chemistry", 3, DocType::Review);
        match is_highly_cited(&stray, &corpus, 0.1) {
            Err(Error::MissingGroup { category, year }) => {
                assert_eq!(category, "Chemistry");
                assert_eq!(year, 1999);
            }
            other => panic!("unexpected {other:?}"),
        }
        let ok = Publication::new("y", 2015, "Physics", 3, DocType::Article);
        for p in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(
                is_highly_cited(&ok, &corpus, p),
                Err(Error::OutOfRange { .. })
            ));
        }
    }

    #[test]
    fn ineligible_publications_are_rejected() {
        let (_, corpus) = group(&[1]);
        let other = Publication::new("o", 2015, "Physics", 1, DocType::Other);
        assert!(matches!(
            is_highly_cited(&other, &corpus, 0.1),
            Err(Error::IneligiblePublication { .. })
        ));
        let pending = Publication::new("q", 2015, "Physics", 1, DocType::Article)
            .with_validation(Validation::Pending);
        assert!(is_highly_cited(&pending, &corpus, 0.1).is_err());
    }

    #[test]
    fn excluded_publications_do_not_enter_the_corpus() {
        let corpus = ReferenceCorpus::new(vec![
            Publication::new("a", 2015, "Physics", 10, DocType::Article),
            Publication::new("b", 2015, "Physics", 100, DocType::Article)
                .with_validation(Validation::Excluded),
        ]);
        assert_eq!(corpus.len(), 1);
        assert_eq!(corpus.group("Physics", 2015), Some(&[10][..]));
    }

    fn pending(id: &str, citations: u64) -> Publication {
        Publication::new(id, 2015, "Physics", citations, DocType::Article)
            .with_validation(Validation::Pending)
    }

    #[test]
    fn finalize_applies_decisions() {
        let profile = CandidateProfile::new(
            "A",
            vec![pending("p1", 1), pending("p2", 2), pending("p3", 3)],
        );
        let decisions = BTreeMap::from([("p2".to_owned(), Verdict::Excluded)]);
        let done = finalize_publication_list(&profile, &decisions).unwrap();
        let statuses: Vec<_> = done.publications.iter().map(|p| p.validated).collect();
        assert_eq!(
            statuses,
            [
                Validation::Included,
                Validation::Excluded,
                Validation::Included
            ]
        );
        assert!(done.is_finalized());
    }

    #[test]
    fn finalize_empty_profile() {
        let profile = CandidateProfile::new("A", vec![]);
        let done = finalize_publication_list(&profile, &BTreeMap::new()).unwrap();
        assert_eq!(done, profile);
        assert!(done.is_finalized());
    }

    #[test]
    fn finalize_rejects_unknown_ids() {
        let profile = CandidateProfile::new("A", vec![pending("p1", 1)]);
        let decisions = BTreeMap::from([("zz".to_owned(), Verdict::Included)]);
        let err = finalize_publication_list(&profile, &decisions).unwrap_err();
        assert!(matches!(&err, Error::UnknownPublication(id) if id == "zz"));
        assert!(err.to_string().contains("zz"));
    }

    #[test]
    fn count_over_a_profile() {
        let (_, corpus) = group(&(0..10).collect::<Vec<_>>());
        let profile = CandidateProfile::new(
            "A",
            vec![
                Publication::new("mine1", 2015, "Physics", 9, DocType::Article),
                Publication::new("mine2", 2015, "Physics", 3, DocType::Review),
            ],
        );
        assert_eq!(count_highly_cited(&profile, &corpus, 0.1).unwrap(), 1);
        let scored = score_highly_cited(&profile, &corpus, 0.1).unwrap();
        assert_eq!(scored.indicator(HIGHLY_CITED), Some(1.0));

        let empty = CandidateProfile::new("B", vec![]);
        assert_eq!(count_highly_cited(&empty, &corpus, 0.1).unwrap(), 0);

        let other_only = CandidateProfile::new(
            "C",
            vec![Publication::new("ed", 2015, "Physics", 9, DocType::Other)],
        );
        assert_eq!(count_highly_cited(&other_only, &corpus, 0.1).unwrap(), 0);

        let unfinished = CandidateProfile::new("D", vec![pending("p", 9)]);
        assert!(matches!(
            count_highly_cited(&unfinished, &corpus, 0.1),
            Err(Error::PendingPublications { count: 1, .. })
        ));
    }

    #[test]
    fn score_profile_writes_summary_indicators() {
        let (_, corpus) = group(&(0..10).collect::<Vec<_>>());
        let profile = CandidateProfile::new(
            "A",
            vec![
                Publication::new("a", 2015, "Physics", 9, DocType::Article),
                Publication::new("b", 2015, "Physics", 3, DocType::Review),
                Publication::new("c", 2015, "Physics", 50, DocType::Other),
                Publication::new("d", 2015, "Physics", 7, DocType::Article)
                    .with_validation(Validation::Excluded),
            ],
        );
        let scored = score_profile(&profile, &corpus, 0.1).unwrap();
        assert_eq!(scored.indicator(HIGHLY_CITED), Some(1.0));
        assert_eq!(scored.indicator(PUBLICATIONS), Some(2.0));
        assert_eq!(scored.indicator(CITATIONS), Some(12.0));
    }

    #[test]
    fn indicator_definitions_parse() {
        let d: IndicatorDefinition = "single_author:lower".parse().unwrap();
        assert_eq!(d.name(), "single_author");
        assert_eq!(d.direction(), Direction::LowerIsBetter);
        assert_eq!(d.to_string(), "single_author:lower");
        let h: IndicatorDefinition = "hcp".parse().unwrap();
        assert_eq!(h.direction(), Direction::HigherIsBetter);
        assert!("".parse::<IndicatorDefinition>().is_err());
        assert!("x:sideways".parse::<IndicatorDefinition>().is_err());
    }

    #[test]
    fn profile_rejects_non_finite_scores() {
        let p = CandidateProfile::new("A", vec![]);
        assert!(p.clone().with_indicator("hcp", f64::NAN).is_err());
        assert!(p.clone().with_indicator("hcp", f64::INFINITY).is_err());
        assert!(p.with_indicator("", 1.0).is_err());
    }

    proptest! {
        #[test]
        fn upward_closure_and_quota(cites in prop::collection::vec(0u64..20, 1..40), p in 0.01f64..0.99) {
            let (pubs, corpus) = group(&cites);
            let flags: Vec<bool> = pubs.iter().map(|x| is_highly_cited(x, &corpus, p).unwrap()).collect();
            prop_assert!(flags.iter().any(|&f| f));
            for (i, &fi) in flags.iter().enumerate() {
                prop_assert_eq!(fi, oracle_top(&cites, cites[i], p));
                if fi {
                    for (j, &fj) in flags.iter().enumerate() {
                        if cites[j] >= cites[i] {
                            prop_assert!(fj);
                        }
                    }
                }
            }
        }

        #[test]
        fn exclusion_never_increases_count(
            cites in prop::collection::vec(0u64..20, 1..30),
            mask in prop::collection::vec(any::<bool>(), 30),
            p in 0.01f64..0.99,
        ) {
            let (pubs, corpus) = group(&cites);
            let profile = CandidateProfile::new("A", pubs.clone());
            let before = count_highly_cited(&profile, &corpus, p).unwrap();
            let decisions: BTreeMap<String, Verdict> = pubs
                .iter()
                .zip(&mask)
                .filter(|(_, &m)| m)
                .map(|(p, _)| (p.id.clone(), Verdict::Excluded))
                .collect();
            let trimmed = finalize_publication_list(&profile, &decisions).unwrap();
            let after = count_highly_cited(&trimmed, &corpus, p).unwrap();
            prop_assert!(after <= before);
        }
    }
}

//! Delimited tabular files.
//!
//! Every table has a header row. The delimiter is a tab when the header line
//! contains one and a comma otherwise. Fields are trimmed. Errors carry the
//! 1-based line number of the offending record.
//!
//! | table        | columns                                                           |
//! |--------------|-------------------------------------------------------------------|
//! | corpus       | `id, year, category, citations, doc_type`                         |
//! | candidates   | `candidate_id, id, year, category, citations, doc_type, validated` |
//! | indicators   | `candidate_id` plus one numeric column per indicator              |
//! | decisions    | `id, decision`                                                    |
//! | environment  | `id, criterion` plus one column per cue, `name` or `name:lower`   |
//! | career       | `position, impact`                                                |
//!
//! Extra columns in the corpus, candidate and decision tables are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::careers::CareerSequence;
use crate::ecology::{EnvObject, Environment};
use crate::indicators::{
    CandidateProfile, DocType, IndicatorDefinition, Publication, Validation, Verdict,
};
use crate::{Error, Result};

fn delimiter(text: &str) -> u8 {
    let header = text.lines().next().unwrap_or("");
    if header.contains('\t') {
        b'\t'
    } else {
        b','
    }
}

struct Table {
    headers: Vec<String>,
    rows: Vec<(u64, StringRecord)>,
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(line, e.to_string())
}

fn read_table(text: &str) -> Result<Table> {
    let mut reader = ReaderBuilder::new()
        .delimiter(delimiter(text))
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut seen = BTreeSet::new();
    for h in &headers {
        if !seen.insert(h.as_str()) {
            return Err(Error::parse(1, format!("duplicate column `{h}`")));
        }
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push((line, record));
    }
    Ok(Table { headers, rows })
}

impl Table {
    fn column(&self, name: &'static str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or(Error::MissingColumn(name))
    }
}

fn field<T: FromStr>(record: &StringRecord, line: u64, idx: usize, name: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = record.get(idx).unwrap_or("");
    raw.parse()
        .map_err(|e| Error::parse(line, format!("column `{name}`: `{raw}`: {e}")))
}

fn text_field(record: &StringRecord, line: u64, idx: usize, name: &str) -> Result<String> {
    let raw = record.get(idx).unwrap_or("");
    if raw.is_empty() {
        return Err(Error::parse(line, format!("column `{name}` is empty")));
    }
    Ok(raw.to_owned())
}

fn finite(record: &StringRecord, line: u64, idx: usize, name: &str) -> Result<f64> {
    let v: f64 = field(record, line, idx, name)?;
    if !v.is_finite() {
        return Err(Error::parse(
            line,
            format!("column `{name}` must be finite"),
        ));
    }
    Ok(v)
}

struct PublicationColumns {
    id: usize,
    year: usize,
    category: usize,
    citations: usize,
    doc_type: usize,
}

impl PublicationColumns {
    fn locate(t: &Table) -> Result<Self> {
        Ok(PublicationColumns {
            id: t.column("id")?,
            year: t.column("year")?,
            category: t.column("category")?,
            citations: t.column("citations")?,
            doc_type: t.column("doc_type")?,
        })
    }

    fn read(&self, r: &StringRecord, line: u64) -> Result<Publication> {
        Ok(Publication::new(
            text_field(r, line, self.id, "id")?,
            field(r, line, self.year, "year")?,
            text_field(r, line, self.category, "category")?,
            field(r, line, self.citations, "citations")?,
            field::<DocType>(r, line, self.doc_type, "doc_type")?,
        ))
    }
}

/// Reference corpus rows. Publication ids must be unique.
pub fn parse_corpus(text: &str) -> Result<Vec<Publication>> {
    let t = read_table(text)?;
    let cols = PublicationColumns::locate(&t)?;
    let mut ids = BTreeSet::new();
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, r) in &t.rows {
        let p = cols.read(r, *line)?;
        if !ids.insert(p.id.clone()) {
            return Err(Error::parse(
                *line,
                format!("duplicate publication id `{}`", p.id),
            ));
        }
        out.push(p);
    }
    Ok(out)
}

/// Candidate publication lists, one profile per `candidate_id` in order of
/// first appearance.
pub fn parse_candidates(text: &str) -> Result<Vec<CandidateProfile>> {
    let t = read_table(text)?;
    let cand = t.column("candidate_id")?;
    let cols = PublicationColumns::locate(&t)?;
    let validated = t.column("validated")?;
    let mut order: Vec<CandidateProfile> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (line, r) in &t.rows {
        let line = *line;
        let id = text_field(r, line, cand, "candidate_id")?;
        let p = cols.read(r, line)?.with_validation(field::<Validation>(
            r,
            line,
            validated,
            "validated",
        )?);
        let slot = *index.entry(id.clone()).or_insert_with(|| {
            order.push(CandidateProfile::new(id.clone(), Vec::new()));
            order.len() - 1
        });
        let profile = &mut order[slot];
        if profile.publications.iter().any(|q| q.id == p.id) {
            return Err(Error::parse(
                line,
                format!("candidate `{id}` lists publication `{}` twice", p.id),
            ));
        }
        profile.publications.push(p);
    }
    Ok(order)
}

/// Precomputed indicator scores: `candidate_id` plus one column per indicator.
/// Candidate ids must be unique.
pub fn parse_indicator_table(text: &str) -> Result<Vec<CandidateProfile>> {
    let t = read_table(text)?;
    let cand = t.column("candidate_id")?;
    let mut ids = BTreeSet::new();
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, r) in &t.rows {
        let line = *line;
        let id = text_field(r, line, cand, "candidate_id")?;
        if !ids.insert(id.clone()) {
            return Err(Error::parse(line, format!("duplicate candidate `{id}`")));
        }
        let mut profile = CandidateProfile::new(id, Vec::new());
        for (i, name) in t.headers.iter().enumerate() {
            if i == cand {
                continue;
            }
            if name.is_empty() {
                return Err(Error::parse(1, "empty column name"));
            }
            profile.set_indicator(name.clone(), finite(r, line, i, name)?)?;
        }
        out.push(profile);
    }
    Ok(out)
}

/// Validation verdicts keyed by publication id.
pub fn parse_decisions(text: &str) -> Result<BTreeMap<String, Verdict>> {
    let t = read_table(text)?;
    let id = t.column("id")?;
    let decision = t.column("decision")?;
    let mut out = BTreeMap::new();
    for (line, r) in &t.rows {
        let key = text_field(r, *line, id, "id")?;
        let verdict = field::<Verdict>(r, *line, decision, "decision")?;
        if out.insert(key.clone(), verdict).is_some() {
            return Err(Error::parse(
                *line,
                format!("duplicate decision for `{key}`"),
            ));
        }
    }
    Ok(out)
}

pub fn parse_environment(text: &str) -> Result<Environment> {
    let t = read_table(text)?;
    let id = t.column("id")?;
    let criterion = t.column("criterion")?;
    let mut cues = Vec::new();
    let mut dirs = BTreeMap::new();
    for (i, h) in t.headers.iter().enumerate() {
        if i == id || i == criterion {
            continue;
        }
        let def: IndicatorDefinition = h
            .parse()
            .map_err(|e: Error| Error::parse(1, format!("cue column `{h}`: {e}")))?;
        if dirs
            .insert(def.name().to_owned(), def.direction())
            .is_some()
        {
            return Err(Error::parse(
                1,
                format!("cue `{}` appears twice", def.name()),
            ));
        }
        cues.push((i, def.name().to_owned()));
    }
    let mut ids = BTreeSet::new();
    let mut objects = Vec::with_capacity(t.rows.len());
    for (line, r) in &t.rows {
        let line = *line;
        let oid = text_field(r, line, id, "id")?;
        if !ids.insert(oid.clone()) {
            return Err(Error::parse(line, format!("duplicate object `{oid}`")));
        }
        let mut values = BTreeMap::new();
        for (i, name) in &cues {
            values.insert(name.clone(), finite(r, line, *i, name)?);
        }
        objects.push(EnvObject {
            id: oid,
            criterion: finite(r, line, criterion, "criterion")?,
            cues: values,
        });
    }
    Environment::new(objects, dirs)
}

/// Comma-separated; cue columns in ascending name order. Values use the
/// shortest representation that parses back to the same float.
pub fn write_environment(env: &Environment) -> String {
    let defs = env.cue_definitions();
    let mut out = String::from("id,criterion");
    for d in &defs {
        write!(out, ",{d}").unwrap();
    }
    out.push('\n');
    for o in env.objects() {
        write!(out, "{},{}", o.id, o.criterion).unwrap();
        for d in &defs {
            write!(out, ",{}", o.cues[d.name()]).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Impacts ordered by `position`, which must be strictly increasing.
pub fn parse_career(owner: &str, text: &str) -> Result<CareerSequence> {
    let t = read_table(text)?;
    let pos = t.column("position")?;
    let impact = t.column("impact")?;
    let mut last: Option<i64> = None;
    let mut impacts = Vec::with_capacity(t.rows.len());
    for (line, r) in &t.rows {
        let line = *line;
        let p: i64 = field(r, line, pos, "position")?;
        if last.is_some_and(|l| p <= l) {
            return Err(Error::parse(line, "positions must be strictly increasing"));
        }
        last = Some(p);
        let v = finite(r, line, impact, "impact")?;
        if v < 0.0 {
            return Err(Error::parse(line, "impact must be non-negative"));
        }
        impacts.push(v);
    }
    if impacts.is_empty() {
        return Err(Error::SequenceTooShort { len: 0, min: 1 });
    }
    CareerSequence::new(owner, impacts)
}

/// Positions are the 0-based indices that detection reports.
pub fn write_career(seq: &CareerSequence) -> String {
    let mut out = String::from("position,impact\n");
    for (i, v) in seq.impacts().iter().enumerate() {
        writeln!(out, "{i},{v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecology::generate_gaussian_environment;
    use crate::indicators::{Direction, ReferenceCorpus};
    use proptest::prelude::*;

    const CORPUS: &str = "id,year,category,citations,doc_type\n\
                          p1,2015,physics,12,article\n\
                          p2,2015,physics,3,review\n\
                          p3,2016,biology,0,other\n";

    #[test]
    fn three_row_corpus() {
        let pubs = parse_corpus(CORPUS).unwrap();
        assert_eq!(pubs.len(), 3);
        assert_eq!(
            pubs[0],
            Publication::new("p1", 2015, "physics", 12, DocType::Article)
        );
        assert_eq!(pubs[2].doc_type, DocType::Other);
        let corpus: ReferenceCorpus = pubs.into_iter().collect();
        assert_eq!(corpus.group("physics", 2015), Some(&[3, 12][..]));
    }

    #[test]
    fn tab_delimited_and_trimmed() {
        let tsv = "id\tyear\tcategory\tcitations\tdoc_type\n p1 \t2015\tphysics\t 4\tarticle\n";
        let pubs = parse_corpus(tsv).unwrap();
        assert_eq!(pubs[0].id, "p1");
        assert_eq!(pubs[0].citations, 4);
    }

    #[test]
    fn bad_citations_name_the_line() {
        let text = CORPUS.replace("p2,2015,physics,3", "p2,2015,physics,abc");
        match parse_corpus(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("citations"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let negative = CORPUS.replace(",3,", ",-3,");
        assert!(matches!(
            parse_corpus(&negative),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn corpus_contract_violations() {
        assert!(matches!(
            parse_corpus("id,year,category,doc_type\np,2000,x,article\n"),
            Err(Error::MissingColumn("citations"))
        ));
        let bad_type = CORPUS.replace("review", "preprint");
        match parse_corpus(&bad_type) {
            Err(Error::Parse { line: 3, message }) => assert!(message.contains("preprint")),
            other => panic!("unexpected {other:?}"),
        }
        let dup = format!("{CORPUS}p1,2017,x,1,article\n");
        assert!(matches!(
            parse_corpus(&dup),
            Err(Error::Parse { line: 5, .. })
        ));
        assert!(parse_corpus("id,id,year,category,citations,doc_type\n").is_err());
        assert!(matches!(
            parse_corpus("id,year,category,citations,doc_type\np,2000,x,1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn header_only_candidates() {
        let text = "candidate_id,id,year,category,citations,doc_type,validated\n";
        assert!(parse_candidates(text).unwrap().is_empty());
        assert!(parse_candidates("").is_err());
    }

    #[test]
    fn candidates_group_in_order() {
        let text = "candidate_id,id,year,category,citations,doc_type,validated\n\
                    B,x1,2010,c,5,article,included\n\
                    A,x2,2010,c,1,review,pending\n\
                    B,x3,2011,c,0,article,excluded\n";
        let cands = parse_candidates(text).unwrap();
        assert_eq!(
            cands.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(),
            ["B", "A"]
        );
        assert_eq!(cands[0].publications.len(), 2);
        assert_eq!(cands[0].publications[1].validated, Validation::Excluded);
        assert_eq!(cands[1].pending_count(), 1);
        let dup = format!("{text}B,x1,2012,c,0,article,included\n");
        assert!(matches!(
            parse_candidates(&dup),
            Err(Error::Parse { line: 5, .. })
        ));
        let bad = text.replace("pending", "maybe");
        assert!(matches!(
            parse_candidates(&bad),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn indicator_table() {
        let text = "candidate_id,highly_cited_papers,h_index\nA,4,12\nB,3,9.5\n";
        let cands = parse_indicator_table(text).unwrap();
        assert_eq!(cands[1].indicator("h_index"), Some(9.5));
        assert_eq!(cands[0].indicator("highly_cited_papers"), Some(4.0));
        assert!(parse_indicator_table("candidate_id,x\nA,inf\n").is_err());
        assert!(parse_indicator_table("candidate_id,x\nA,1\nA,2\n").is_err());
        assert!(parse_indicator_table("x\n1\n").is_err());
    }

    #[test]
    fn decisions_table() {
        let d = parse_decisions("id,decision\np1,included\np2,excluded\n").unwrap();
        assert_eq!(d["p2"], Verdict::Excluded);
        assert!(parse_decisions("id,decision\np1,pending\n").is_err());
        assert!(parse_decisions("id,decision\np1,included\np1,excluded\n").is_err());
    }

    #[test]
    fn environment_directions() {
        let text = "id,criterion,size,age:lower\na,1,3,10\nb,2,4,5\n";
        let env = parse_environment(text).unwrap();
        assert_eq!(env.direction("age"), Some(Direction::LowerIsBetter));
        assert_eq!(env.direction("size"), Some(Direction::HigherIsBetter));
        assert_eq!(
            write_environment(&env),
            "id,criterion,age:lower,size\na,1,10,3\nb,2,5,4\n"
        );
        assert!(parse_environment("id,criterion,x,x:lower\na,1,1,1\nb,1,1,1\n").is_err());
        assert!(parse_environment("id,criterion,x\na,1,1\na,1,1\n").is_err());
    }

    #[test]
    fn environment_round_trip() {
        let targets = vec![("a".to_owned(), 0.7), ("b".to_owned(), -0.3)];
        let env = generate_gaussian_environment(&targets, 25, 11).unwrap();
        assert_eq!(parse_environment(&write_environment(&env)).unwrap(), env);
    }

    #[test]
    fn career_files() {
        let seq = parse_career("x", "position,impact\n1,0.5\n4,3\n9,0\n").unwrap();
        assert_eq!(seq.impacts(), [0.5, 3.0, 0.0]);
        assert!(matches!(
            parse_career("x", "position,impact\n1,1\n1,2\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_career("x", "position,impact\n1,-1\n").is_err());
        assert!(parse_career("x", "position,impact\n").is_err());
        assert!(parse_career("x", "position\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn career_round_trip(v in prop::collection::vec(0.0f64..1e6, 1..40)) {
            let seq = CareerSequence::new("c", v).unwrap();
            prop_assert_eq!(parse_career("c", &write_career(&seq)).unwrap(), seq);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC{0,200}") {
            let _ = parse_corpus(&s);
            let _ = parse_candidates(&s);
            let _ = parse_indicator_table(&s);
            let _ = parse_decisions(&s);
            let _ = parse_environment(&s);
            let _ = parse_career("x", &s);
        }
    }
}

//! JSON and CSV encodings of a [`CharlierTable`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{CharlierParams, CharlierTable};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::polycore::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntryDocument {
    pub index: MultiIndex,
    #[serde(with = "crate::serde_util::poly_coeffs")]
    pub coeffs: UniPoly,
}

/// `{params, max_total_degree, entries: [{index, coeffs}]}` with
/// coefficients as `"p/q"` strings, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub params: CharlierParams,
    pub max_total_degree: usize,
    pub entries: Vec<TableEntryDocument>,
}

impl From<&CharlierTable> for TableDocument {
    fn from(t: &CharlierTable) -> Self {
        TableDocument {
            params: t.params().clone(),
            max_total_degree: t.max_total_degree(),
            entries: t
                .iter()
                .map(|(n, c)| TableEntryDocument {
                    index: n.clone(),
                    coeffs: c.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<TableDocument> for CharlierTable {
    type Error = Error;

    fn try_from(doc: TableDocument) -> Result<Self> {
        let mut entries = std::collections::BTreeMap::new();
        for e in doc.entries {
            if entries.insert(e.index.clone(), e.coeffs).is_some() {
                return Err(Error::Table(format!("duplicate entry {}", e.index)));
            }
        }
        CharlierTable::from_entries(doc.params, doc.max_total_degree, entries)
    }
}

impl CharlierTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TableDocument::from(self)).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableDocument =
            serde_json::from_str(s).map_err(|e| Error::Table(e.to_string()))?;
        doc.try_into()
    }

    /// Header row `n1..nr,k=0..k=kmax`, then one row per index in graded-lex
    /// order with `C_n(k)` as exact rational strings.
    pub fn to_csv(&self, kmax: usize) -> String {
        let mut out = String::new();
        let mut header: Vec<String> = (1..=self.r()).map(|i| format!("n{i}")).collect();
        header.extend((0..=kmax).map(|k| format!("k={k}")));
        out.push_str(&header.join(","));
        out.push('\n');
        for (n, c) in self.iter() {
            let mut row: Vec<String> = n.entries().iter().map(u32::to_string).collect();
            row.extend((0..=kmax).map(|k| c.eval_int(k as i64).to_string()));
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charlier::build_table;

    #[test]
    fn csv_rows() {
        let p = CharlierParams::from_fractions(&[(1, 1), (2, 1)]).unwrap();
        let csv = build_table(&p, 2).to_csv(4);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n1,n2,k=0,k=1,k=2,k=3,k=4");
        assert_eq!(lines[1], "0,0,1,1,1,1,1");
        assert!(lines.contains(&"1,1,2,-1,-2,-1,2"));
        assert_eq!(lines.len(), 7);

        let zero = build_table(&p, 0).to_csv(0);
        assert_eq!(zero, "n1,n2,k=0\n0,0,1\n");
    }

    #[test]
    fn json_round_trip() {
        let p = CharlierParams::from_fractions(&[(1, 2), (3, 2)]).unwrap();
        let t = build_table(&p, 4);
        let json = t.to_json();
        assert!(json.contains("\"sigma\": [\n      \"1/2\",\n      \"3/2\"\n    ]"));
        assert_eq!(CharlierTable::from_json(&json).unwrap(), t);
    }

    #[test]
    fn json_rejects_bad_documents() {
        let bad_sigma = r#"{"params":{"r":1,"sigma":["0"]},"max_total_degree":0,
            "entries":[{"index":[0],"coeffs":["1"]}]}"#;
        assert!(CharlierTable::from_json(bad_sigma).is_err());
        let missing = r#"{"params":{"r":1,"sigma":["1"]},"max_total_degree":1,
            "entries":[{"index":[0],"coeffs":["1"]}]}"#;
        assert_eq!(
            CharlierTable::from_json(missing),
            Err(Error::MissingIndex(vec![1]))
        );
        let bad_coeff = r#"{"params":{"r":1,"sigma":["1"]},"max_total_degree":0,
            "entries":[{"index":[0],"coeffs":["1.5"]}]}"#;
        assert!(CharlierTable::from_json(bad_coeff).is_err());
    }
}

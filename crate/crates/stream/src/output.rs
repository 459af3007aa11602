//! Snapshot files. Rows follow the snapshot order, which is lexicographic
//! over item codes.

use std::io::{self, Write};

use cistream_core::{Dictionary, Item, Itemset};
use serde_json::json;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// `tok tok<TAB>support`
    #[default]
    Tsv,
    /// `{"itemset":[..],"support":n}`
    Jsonl,
}

fn token(dict: &Dictionary, a: Item) -> String {
    dict.token(a)
        .map_or_else(|| a.0.to_string(), str::to_string)
}

pub fn write_snapshot<W: Write>(
    mut out: W,
    snapshot: &[(Itemset, u32)],
    dict: &Dictionary,
    format: Format,
) -> io::Result<()> {
    for (x, support) in snapshot {
        let tokens: Vec<String> = x.items().iter().map(|&a| token(dict, a)).collect();
        match format {
            Format::Tsv => writeln!(out, "{}\t{support}", tokens.join(" "))?,
            Format::Jsonl => {
                serde_json::to_writer(&mut out, &json!({ "itemset": tokens, "support": support }))?;
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

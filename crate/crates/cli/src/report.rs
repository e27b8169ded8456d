//! Aligned text tables over the audit, cross-org, pass@k and dataset artifacts.

use std::collections::BTreeMap;

use collabaudit_core::audit::format_percent;
use collabaudit_core::corpus::BYTES_PER_MB;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::pipeline::{
    AuditRow, CloneSummaryRow, CrossOrgRow, PassKModelRow, Pipeline, PromptCountRow, StatsRow,
    AUDIT, CLONE_SUMMARY, CROSSORG, CROSSORG_SUMMARY, PASSK, PROMPT_COUNTS, STATS,
};

pub const REPORT_DIR: &str = "report";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Align {
    Left,
    Right,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: String,
    pub columns: Vec<(String, Align)>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, columns: &[(&str, Align)]) -> Self {
        Self {
            title: title.to_string(),
            columns: columns.iter().map(|(c, a)| (c.to_string(), *a)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut width: Vec<usize> = self
            .columns
            .iter()
            .map(|(c, _)| c.chars().count())
            .collect();
        for row in &self.rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| -> String {
            let parts: Vec<String> = cells
                .iter()
                .zip(&self.columns)
                .zip(&width)
                .map(|((cell, (_, align)), &w)| match align {
                    Align::Left => format!("{cell:<w$}"),
                    Align::Right => format!("{cell:>w$}"),
                })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = format!("{}\n\n", self.title);
        out.push_str(&line(
            self.columns.iter().map(|(c, _)| c.as_str()).collect(),
        ));
        out.push('\n');
        let total: usize = width.iter().sum::<usize>() + 2 * width.len().saturating_sub(1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

/// `1234567` as `1,234,567`.
pub fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Sort key grouping single-org baselines, synchronous and then sequential
/// strategies.
fn model_rank(name: &str) -> (u8, &str) {
    let group = if name.ends_with("_Only") {
        0
    } else if name.starts_with("Centralized_") {
        1
    } else if name.starts_with("Federated_Avg_") {
        2
    } else if name.starts_with("Federated_Yogi_") {
        3
    } else {
        4
    };
    (group, name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummedRow {
    pub rank: usize,
    pub model: String,
    pub lines_of_gen: usize,
    pub mem_blocks: usize,
    pub mem_lines: usize,
    pub mem_ratio: Option<f64>,
}

/// `n/a` when nothing was generated.
pub fn ratio_cell(ratio: Option<f64>) -> String {
    ratio.map_or_else(|| "n/a".to_string(), format_percent)
}

/// Per-model totals across organizations, highest ratio first.
pub fn summed(rows: &[AuditRow]) -> Vec<SummedRow> {
    let mut acc: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    for r in rows {
        let e = acc.entry(&r.model).or_default();
        e.0 += r.lines_of_gen;
        e.1 += r.mem_blocks;
        e.2 += r.mem_lines;
    }
    let mut out: Vec<SummedRow> = acc
        .into_iter()
        .map(|(m, (g, b, l))| SummedRow {
            rank: 0,
            model: m.to_string(),
            lines_of_gen: g,
            mem_blocks: b,
            mem_lines: l,
            mem_ratio: (g > 0).then(|| l as f64 / g as f64),
        })
        .collect();
    out.sort_by(|a, b| {
        let key = |r: &SummedRow| r.mem_ratio.unwrap_or(-1.0);
        key(b)
            .total_cmp(&key(a))
            .then_with(|| a.model.cmp(&b.model))
    });
    for (i, r) in out.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    out
}

pub fn memorization_table(rows: &[AuditRow], orgs: &[&str]) -> Table {
    let mut cols: Vec<(String, Align)> = vec![("Model".into(), Align::Left)];
    for o in orgs {
        for c in ["Lns of Gen.", "Mem. Blks", "Mem. Lns", "Mem. Ratio"] {
            cols.push((format!("{o} {c}"), Align::Right));
        }
    }
    let mut table = Table {
        title: "Memorization per training corpus".into(),
        columns: cols,
        rows: Vec::new(),
    };
    let mut models: Vec<&str> = rows.iter().map(|r| r.model.as_str()).collect();
    models.sort_by_key(|m| model_rank(m));
    models.dedup();
    for m in models {
        let mut row = vec![m.to_string()];
        for o in orgs {
            match rows.iter().find(|r| r.model == m && r.org == *o) {
                Some(r) => row.extend([
                    thousands(r.lines_of_gen),
                    thousands(r.mem_blocks),
                    thousands(r.mem_lines),
                    ratio_cell(r.mem_ratio),
                ]),
                None => row.extend(std::iter::repeat_n("-".to_string(), 4)),
            }
        }
        table.push(row);
    }
    table
}

pub fn summed_table(rows: &[SummedRow]) -> Table {
    let mut t = Table::new(
        "Memorization summed over corpora",
        &[
            ("Rank", Align::Right),
            ("Model", Align::Left),
            ("Lns of Gen.", Align::Right),
            ("Mem. Blks", Align::Right),
            ("Mem. Lns", Align::Right),
            ("Mem. Ratio", Align::Right),
        ],
    );
    for r in rows {
        t.push(vec![
            r.rank.to_string(),
            r.model.clone(),
            thousands(r.lines_of_gen),
            thousands(r.mem_blocks),
            thousands(r.mem_lines),
            ratio_cell(r.mem_ratio),
        ]);
    }
    t
}

pub fn crossorg_table(rows: &[CrossOrgRow]) -> Table {
    let mut t = Table::new(
        "Cross-organization clone memorization",
        &[
            ("Model", Align::Left),
            ("Lns of Gen.", Align::Right),
            ("Mem. Blks", Align::Right),
            ("Mem. Lns", Align::Right),
            ("Mem. Ratio", Align::Right),
        ],
    );
    let mut rows: Vec<&CrossOrgRow> = rows.iter().collect();
    rows.sort_by_key(|r| model_rank(&r.model));
    for r in rows {
        t.push(vec![
            r.model.clone(),
            thousands(r.lines_of_gen),
            thousands(r.mem_blocks),
            thousands(r.mem_lines),
            ratio_cell(r.mem_ratio),
        ]);
    }
    t
}

pub fn passk_table(rows: &[PassKModelRow]) -> Table {
    let ks: Vec<usize> = rows
        .first()
        .map(|r| r.pass_at.iter().map(|p| p.k).collect())
        .unwrap_or_default();
    let mut cols = vec![
        ("Model".to_string(), Align::Left),
        ("Perplexity".to_string(), Align::Right),
    ];
    cols.extend(ks.iter().map(|k| (format!("Pass@{k}"), Align::Right)));
    let mut t = Table {
        title: "Perplexity and pass@k".into(),
        columns: cols,
        rows: Vec::new(),
    };
    let mut rows: Vec<&PassKModelRow> = rows.iter().collect();
    rows.sort_by_key(|r| model_rank(&r.model));
    for r in rows {
        let mut row = vec![r.model.clone(), format!("{:.2}", r.perplexity)];
        row.extend(r.pass_at.iter().map(|p| format_percent(p.pass_at_k)));
        t.push(row);
    }
    t
}

pub fn dataset_tables(stats: &[StatsRow]) -> Vec<Table> {
    let mut splits = Table::new(
        "Dataset splits",
        &[
            ("Dataset", Align::Left),
            ("Split", Align::Left),
            ("Files Count", Align::Right),
            ("Size", Align::Right),
        ],
    );
    let mb = |b: usize| format!("{:.2} MB", b as f64 / BYTES_PER_MB);
    for s in stats {
        splits.push(vec![
            s.org.clone(),
            "Training".into(),
            thousands(s.train_files),
            mb(s.train_bytes),
        ]);
        splits.push(vec![
            String::new(),
            "Validation".into(),
            thousands(s.validation_files),
            mb(s.validation_bytes),
        ]);
    }
    let mut per_mb = Table::new(
        "Metrics per megabyte",
        &[
            ("Dataset", Align::Left),
            ("LOC", Align::Right),
            ("Classes", Align::Right),
            ("Funcs", Align::Right),
            ("Docs", Align::Right),
            ("Clone Blks", Align::Right),
            ("Clone LOC", Align::Right),
        ],
    );
    for s in stats {
        let p = &s.per_mb;
        per_mb.push(
            std::iter::once(s.org.clone())
                .chain(
                    [
                        p.loc_per_mb,
                        p.classes_per_mb,
                        p.funcs_per_mb,
                        p.docs_per_mb,
                        p.clone_blocks_per_mb,
                        p.clone_loc_per_mb,
                    ]
                    .iter()
                    .map(|v| format!("{v:.2}")),
                )
                .collect(),
        );
    }
    vec![splits, per_mb]
}

pub fn prompt_table(rows: &[PromptCountRow]) -> Table {
    let mut t = Table::new(
        "Function prompts",
        &[
            ("Dataset", Align::Left),
            ("Total Functions", Align::Right),
            ("Total Prompts", Align::Right),
            ("Sampled", Align::Right),
        ],
    );
    for r in rows {
        t.push(vec![
            r.org.clone(),
            thousands(r.total_functions),
            thousands(r.total_prompts),
            thousands(r.sampled),
        ]);
    }
    t
}

pub fn clone_summary_table(title: &str, rows: &[CloneSummaryRow]) -> Table {
    let mut t = Table::new(
        title,
        &[
            ("Dataset", Align::Left),
            ("Total Lns", Align::Right),
            ("Clone Blks", Align::Right),
            ("Clone Lns", Align::Right),
        ],
    );
    for r in rows {
        t.push(vec![
            r.org.clone(),
            thousands(r.total_lines),
            thousands(r.clone_blocks),
            thousands(r.clone_lines),
        ]);
    }
    t
}

impl Pipeline {
    fn optional<T: serde::de::DeserializeOwned>(
        &self,
        name: &str,
        producer: &'static str,
    ) -> CliResult<Option<Vec<T>>> {
        match self.store.read_records(name, producer) {
            Ok(v) => Ok(Some(v)),
            Err(CliError::MissingArtifact { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn write_table(&self, file: &str, table: &Table) -> CliResult<()> {
        let text = format!(
            "# config {} seed {}\n{}",
            self.store.config_hash(),
            self.cfg.seed,
            table.render()
        );
        self.store
            .write_text(&format!("{REPORT_DIR}/{file}"), &text)
    }

    /// Renders every table whose inputs exist; the audit is required. Returns
    /// the files written, relative to the output directory.
    pub fn report(&self) -> CliResult<Vec<String>> {
        let audit: Vec<AuditRow> = self.store.read_records(AUDIT, "audit")?;
        let orgs = self.cfg.org_ids();
        let mut written = Vec::new();
        let mut emit = |file: &str, table: &Table| -> CliResult<()> {
            self.write_table(file, table)?;
            written.push(format!("{REPORT_DIR}/{file}"));
            Ok(())
        };
        emit("memorization.txt", &memorization_table(&audit, &orgs))?;
        let sums = summed(&audit);
        emit("memorization_summed.txt", &summed_table(&sums))?;
        if let Some(rows) = self.optional::<CrossOrgRow>(CROSSORG, "crossorg")? {
            emit("crossorg.txt", &crossorg_table(&rows))?;
        }
        if let Some(rows) = self.optional::<CloneSummaryRow>(CROSSORG_SUMMARY, "crossorg")? {
            emit(
                "crossorg_clones.txt",
                &clone_summary_table("Cross-organization clones", &rows),
            )?;
        }
        if let Some(rows) = self.optional::<PassKModelRow>(PASSK, "passk")? {
            emit("passk.txt", &passk_table(&rows))?;
        }
        if let Some(rows) = self.optional::<StatsRow>(STATS, "stats")? {
            let tables = dataset_tables(&rows);
            emit("splits.txt", &tables[0])?;
            emit("per_mb.txt", &tables[1])?;
        }
        if let Some(rows) = self.optional::<CloneSummaryRow>(CLONE_SUMMARY, "clones")? {
            emit(
                "clones.txt",
                &clone_summary_table("Clones per training corpus", &rows),
            )?;
        }
        if let Some(rows) = self.optional::<PromptCountRow>(PROMPT_COUNTS, "prompts")? {
            emit("prompts.txt", &prompt_table(&rows))?;
        }
        let summed_name = format!("{REPORT_DIR}/memorization_summed.jsonl");
        self.store.write_records(&summed_name, &sums)?;
        written.push(summed_name);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(model: &str, org: &str, gen: usize, blocks: usize, lines: usize) -> AuditRow {
        AuditRow {
            model: model.into(),
            org: org.into(),
            lines_of_gen: gen,
            mem_blocks: blocks,
            mem_lines: lines,
            mem_ratio: Some(lines as f64 / gen as f64),
        }
    }

    #[test]
    fn thousands_separators() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(2_961_075), "2,961,075");
        assert_eq!(thousands(1_000), "1,000");
    }

    #[test]
    fn summed_rows_rank_by_ratio() {
        let rows = vec![
            row("Incremental_G2F2M", "G", 2_911_387, 53, 514),
            row("Incremental_G2F2M", "M", 967_170, 5_762, 78_632),
            row("Incremental_G2F2M", "F", 136_737, 2, 23),
            row("Federated_Avg_FMG", "G", 100, 0, 0),
        ];
        let s = summed(&rows);
        assert_eq!(s[0].model, "Incremental_G2F2M");
        assert_eq!(
            (s[0].lines_of_gen, s[0].mem_blocks, s[0].mem_lines),
            (4_015_294, 5_817, 79_169)
        );
        assert_eq!(ratio_cell(s[0].mem_ratio), "1.972%");
        assert_eq!(s[1].rank, 2);
    }

    #[test]
    fn tables_align_columns() {
        let rows = vec![
            row("Centralized_AB", "A", 2_961_075, 554, 7_372),
            row("A_Only", "B", 10, 0, 0),
        ];
        let text = memorization_table(&rows, &["A", "B"]).render();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[4].starts_with("A_Only"), "{text}");
        assert!(text.contains("0.249%"));
        assert!(text.contains("2,961,075"));
        let header_width = lines[2].len();
        assert!(lines[4].len() <= header_width && lines[5].len() <= header_width);
    }
}

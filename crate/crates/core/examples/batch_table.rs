//! A survey of small metric groups as a TSV table.

use finalg::cli::{emit_table, Command, JobSpec};

fn main() -> finalg::Result<()> {
    let forms = [
        "ev:1",
        "ev:2",
        "ev:3",
        "ev:4",
        "ev:2,2",
        "split:1,3",
        "split:1,5",
        "split:1,7",
    ];
    let mut batch = Vec::new();
    for f in forms {
        batch.push(JobSpec::new(Command::QuadSummary {
            group: None,
            form: f.parse()?,
        }));
    }
    print!("{}", emit_table(&batch)?.to_tsv());
    Ok(())
}

//! Check the engine against the built-in reference tables that run in
//! seconds and print any differences.

use ipd_arena::experiment::{self, builtin_tables};

fn main() -> ipd_arena::Result<()> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    for table in builtin_tables().into_iter().filter(|t| !t.extended) {
        let v = experiment::verify(&table, workers, false)?;
        if v.passed() {
            println!("{}: all {} rows match", table.name, v.rows.len());
        } else {
            print!("{}", v.render_diff());
        }
    }
    Ok(())
}

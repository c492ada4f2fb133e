// Small improvement table over `L` and `K`, written as CSV to stdout,
// followed by a text rendering of the `pct` column.
//
// The full table uses `pvq heatmap`; this keeps the range small enough to
// run in a few seconds.

use pvq::benchmark::{improvement_table, write_table_csv, PGrid, Parallelism, Protocol};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ls: Vec<usize> = (2..=6).collect();
    let ks: Vec<u32> = (1..=8).collect();
    let table = improvement_table(&ls, &ks, &PGrid::standard(), &Protocol::new(2_000, 3), Parallelism::Parallel)?;
    write_table_csv(&table, std::io::stdout().lock())?;

    print!("\n L\\K");
    for k in &ks {
        print!("{k:>6}");
    }
    for l in &ls {
        print!("\n{l:>4}");
        for r in table.iter().filter(|r| r.l == *l) {
            print!("{:>6.1}", r.pct);
        }
    }
    println!();
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

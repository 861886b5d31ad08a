//! The 3-bit worked examples: XOR with key 3, and the table [1,4,2,5,3,0,7,6].

use std::fmt::Write as _;

use qpp_core::analysis::{count_mappings, log10_factorial};
use qpp_core::{PermutationTable, WordSize};
use serde::Serialize;

use super::Outcome;
use crate::output::{record, Printer};

const WORKED_TABLE: [u32; 8] = [1, 4, 2, 5, 3, 0, 7, 6];

#[derive(Debug, Serialize)]
struct Check {
    statement: String,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct MatrixView {
    name: String,
    rows: Vec<String>,
    /// `(input, output)` for each basis label.
    mapping: Vec<(u32, u32)>,
}

#[derive(Debug, Serialize)]
struct Demo {
    matrices: Vec<MatrixView>,
    checks: Vec<Check>,
    tables_mapping_3_to_5: u64,
    log10_group_order_n8: f64,
    passed: bool,
}

fn view(name: &str, table: &PermutationTable) -> MatrixView {
    let dense = table.to_dense_matrix().expect("n = 3");
    MatrixView {
        name: name.to_string(),
        rows: dense.to_string().lines().map(str::to_string).collect(),
        mapping: (0..table.len() as u32)
            .map(|i| (i, table.apply(i).expect("in range")))
            .collect(),
    }
}

fn check(table: &PermutationTable, input: u32, expected: u32, name: &str) -> Check {
    Check {
        statement: format!("{input} → {expected} under {name}"),
        passed: table.apply(input).ok() == Some(expected),
    }
}

pub fn run(printer: Printer) -> Outcome {
    let n = WordSize::new(3)?;
    let x3 = PermutationTable::from_xor_key(n, 3)?;
    let pk = PermutationTable::from_mapping(n, &WORKED_TABLE)?;
    let pk_t = pk.invert();

    let matrices = vec![
        view("X̂_3 encrypt", &x3),
        view("X̂_3 decrypt", &x3.invert()),
        view("P_k encrypt", &pk),
        view("P_k^T decrypt", &pk_t),
    ];
    let mut checks = vec![
        check(&x3, 2, 1, "X̂_3"),
        check(&x3.invert(), 1, 2, "X̂_3"),
        check(&pk, 3, 5, "P_k"),
        check(&pk_t, 5, 3, "P_k^T"),
    ];
    let transposed = pk_t.to_dense_matrix()? == pk.to_dense_matrix()?.transpose();
    checks.push(Check {
        statement: "P_k^T is the transpose of P_k".into(),
        passed: transposed,
    });

    let degeneracy = count_mappings(n, 3, 5)?;
    let log10_order = log10_factorial(256);
    let passed = checks.iter().all(|c| c.passed) && degeneracy == 5040;

    let mut text = String::new();
    for m in &matrices {
        writeln!(text, "{}", m.name).unwrap();
        for (row, &(input, output)) in m.rows.iter().zip(&m.mapping) {
            writeln!(text, "  {row}    |{input}> -> |{output}>").unwrap();
        }
        text.push('\n');
    }
    for c in &checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        writeln!(text, "[{mark}] {}", c.statement).unwrap();
    }
    writeln!(
        text,
        "\n{degeneracy} of 40320 tables map 3 → 5 (expected (2^3-1)! = 5040)"
    )
    .unwrap();
    writeln!(
        text,
        "entropy: log10(2^8!) ≈ {log10_order:.2}, i.e. about 10^{}",
        log10_order.round()
    )
    .unwrap();
    text.push_str(if passed { "demo: all checks passed" } else { "demo: CHECK FAILED" });

    let demo = Demo {
        matrices,
        checks,
        tables_mapping_3_to_5: degeneracy,
        log10_group_order_n8: log10_order,
        passed,
    };
    printer.emit(&text, &record("demo", &demo));
    Ok(passed)
}

//! Text, CSV and JSON renderings of each command's result.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use fano_core::classify::{format_runs, render_table, TableRow};
use fano_core::kplane::{read_kplane, write_kplane};
use fano_core::params::{compression_component_dim, is_nonempty};
use fano_core::patterns::{count_fixed_points_capped, fixed_orbits_capped};
use fano_core::symalg::plane_in_scheme;
use fano_core::tangent::{tangent_dim, witness_det, witness_perm, CompressedPlane};
use fano_core::{classify as classify_params, FanoError, FanoParams, Family, TriState};

use crate::Format;

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "fano-cli/1";

type Out = Result<String, FanoError>;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn classify(family: Family, m: i64, n: i64, r: i64, k: i64, fmt: Format) -> Out {
    let p = FanoParams::new(m, n, r, k)?;
    if !is_nonempty(&p) {
        return Ok(match fmt {
            Format::Text => format!("{family} m={m} n={n} r={r} k={k}\nverdict: empty\n"),
            Format::Csv => to_csv(
                &["family", "m", "n", "r", "k", "verdict"],
                &[vec![family.to_string(), m.to_string(), n.to_string(), r.to_string(), k.to_string(), "empty".into()]],
            ),
            Format::Json => to_json(&json!({
                "schema": SCHEMA,
                "family": family,
                "params": p,
                "verdict": "empty",
            })),
        });
    }
    let c = classify_params(family, &p)?;
    Ok(match fmt {
        Format::Text => format!(
            "{family} m={m} n={n} r={r} k={k}\n\
             smooth: {} [{}]\n\
             irreducible: {} [{}]\n\
             connected: {} [{}]\n",
            c.smooth.value,
            c.smooth.certificate.tag,
            c.irreducible.value,
            c.irreducible.certificate.tag,
            c.connected.value,
            c.connected.certificate.tag,
        ),
        Format::Csv => to_csv(
            &[
                "family", "m", "n", "r", "k", "smooth", "irreducible", "connected",
                "smooth_tag", "irreducible_tag", "connected_tag",
            ],
            &[vec![
                family.to_string(),
                m.to_string(),
                n.to_string(),
                r.to_string(),
                k.to_string(),
                c.smooth.value.to_string(),
                c.irreducible.value.to_string(),
                c.connected.value.to_string(),
                c.smooth.certificate.tag.clone(),
                c.irreducible.certificate.tag.clone(),
                c.connected.certificate.tag.clone(),
            ]],
        ),
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "family": family,
            "params": p,
            "verdict": "nonempty",
            "smooth": c.smooth,
            "irreducible": c.irreducible,
            "connected": c.connected,
        })),
    })
}

fn cell_char(v: TriState) -> char {
    match v {
        TriState::Connected => 'C',
        TriState::Disconnected => 'D',
        TriState::Unknown => '?',
    }
}

fn opt(v: Option<i64>) -> String {
    v.map_or("--".to_string(), |x| x.to_string())
}

fn runs_or_blank(row: &TableRow, v: TriState) -> String {
    let runs = row.runs(v);
    if runs.is_empty() {
        String::new()
    } else {
        format_runs(&runs)
    }
}

pub fn table(family: Family, n_min: i64, n_max: i64, fmt: Format) -> Out {
    let rows = render_table(family, n_min..=n_max)?;
    match fmt {
        Format::Text => {
            let connected_label = match family {
                Family::Det => "Connected iff k ≤",
                Family::Perm => "Connected if k ≤",
            };
            let lines: Vec<(&str, Vec<String>)> = vec![
                ("n", rows.iter().map(|r| r.n.to_string()).collect()),
                ("Non-empty iff k ≤", rows.iter().map(|r| r.nonempty_max_k.to_string()).collect()),
                ("Singular iff k ≤", rows.iter().map(|r| opt(r.singular_max_k)).collect()),
                (connected_label, rows.iter().map(|r| opt(r.connected_prefix())).collect()),
                ("  or k =", rows.iter().map(|r| runs_or_blank(r, TriState::Connected)).collect()),
                ("Disconnected if k =", rows.iter().map(|r| runs_or_blank(r, TriState::Disconnected)).collect()),
                ("Unknown (?) k =", rows.iter().map(|r| runs_or_blank(r, TriState::Unknown)).collect()),
            ];
            let label_width = lines.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
            let widths: Vec<usize> = (0..rows.len())
                .map(|i| lines.iter().map(|(_, cells)| cells[i].len()).max().unwrap_or(0))
                .collect();
            let mut out = format!("{family}: r = m = n\n");
            for (label, cells) in &lines {
                let pad = label_width - label.chars().count();
                let mut line = format!("{label}{}", " ".repeat(pad));
                for (cell, w) in cells.iter().zip(&widths) {
                    line.push_str(&format!("  {cell:>w$}"));
                }
                out.push_str(line.trim_end());
                out.push('\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut body = Vec::new();
            for row in &rows {
                for k in 1..=row.nonempty_max_k {
                    let singular = row.singular_max_k.is_some_and(|s| k <= s);
                    let verdict = match row.verdict(k).expect("k in range") {
                        TriState::Connected => "connected",
                        TriState::Disconnected => "disconnected",
                        TriState::Unknown => "?",
                    };
                    body.push(vec![
                        family.to_string(),
                        row.n.to_string(),
                        k.to_string(),
                        singular.to_string(),
                        verdict.to_string(),
                    ]);
                }
            }
            Ok(to_csv(&["family", "n", "k", "singular", "connected"], &body))
        }
        Format::Json => {
            let json_rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "nonempty_max_k": r.nonempty_max_k,
                        "singular_max_k": r.singular_max_k,
                        "connected_max_k": r.connected_prefix(),
                        "connected_extra": format_runs(&r.runs(TriState::Connected)),
                        "disconnected": format_runs(&r.runs(TriState::Disconnected)),
                        "unknown": format_runs(&r.runs(TriState::Unknown)),
                        "cells": r.connected_cells.iter().map(|&v| cell_char(v)).collect::<String>(),
                    })
                })
                .collect();
            Ok(to_json(&json!({
                "schema": SCHEMA,
                "family": family,
                "rows": json_rows,
            })))
        }
    }
}

pub fn fixed_points(m: i64, n: i64, r: i64, k: i64, orbits: bool, cap: usize, fmt: Format) -> Out {
    let p = FanoParams::new(m, n, r, k)?;
    let count = count_fixed_points_capped(&p, cap)?;
    let orbit_list = if orbits { Some(fixed_orbits_capped(&p, cap)?) } else { None };
    Ok(match fmt {
        Format::Text => {
            let mut out = format!("fixed points: {count}\n");
            if let Some(list) = &orbit_list {
                out.push_str(&format!("orbits: {}\n", list.len()));
                for o in list {
                    out.push_str(&format!("  {:>4}  {}\n", o.size, o.representative));
                }
            }
            out
        }
        Format::Csv => match &orbit_list {
            None => to_csv(
                &["m", "n", "r", "k", "fixed_points"],
                &[vec![m.to_string(), n.to_string(), r.to_string(), k.to_string(), count.to_string()]],
            ),
            Some(list) => to_csv(
                &["representative", "size"],
                &list
                    .iter()
                    .map(|o| vec![o.representative.to_string(), o.size.to_string()])
                    .collect::<Vec<_>>(),
            ),
        },
        Format::Json => {
            let mut doc = json!({
                "schema": SCHEMA,
                "params": p,
                "fixed_points": count.to_string(),
            });
            if let Some(list) = orbit_list {
                doc["orbit_count"] = json!(list.len());
                doc["orbits"] = json!(list);
            }
            to_json(&doc)
        }
    })
}

pub fn witness(family: Family, m: i64, n: i64, r: i64, k: i64, s: i64) -> Out {
    let plane = match family {
        Family::Det => witness_det(m, n, r, k, s)?,
        Family::Perm => witness_perm(m, n, r, k, s)?,
    };
    write_kplane(plane.matrix())
}

pub fn tangent(text: &str, family: Family, r: Option<i64>, s: i64, fmt: Format) -> Out {
    let mat = read_kplane(text)?;
    let (m, n) = (mat.m() as i64, mat.n() as i64);
    let r = r.unwrap_or(m);
    let plane = CompressedPlane::new(m, n, r, s, mat)?;
    let report = tangent_dim(&plane, family)?;
    let component = match family {
        Family::Det => compression_component_dim(plane.params(), plane.s()).ok(),
        Family::Perm => None,
    };
    let (equations, unknowns) = report.system_size;
    Ok(match fmt {
        Format::Text => {
            let mut out = format!(
                "a_dim: {}\ntangent_dim: {}\nsystem: {equations} equations, {unknowns} unknowns\n",
                report.a_dim, report.tangent_dim
            );
            if let Some(d) = component {
                out.push_str(&format!("component_dim: {d}\n"));
            }
            out
        }
        Format::Csv => to_csv(
            &["family", "s", "a_dim", "tangent_dim", "equations", "unknowns", "component_dim"],
            &[vec![
                family.to_string(),
                s.to_string(),
                report.a_dim.to_string(),
                report.tangent_dim.to_string(),
                equations.to_string(),
                unknowns.to_string(),
                opt(component),
            ]],
        ),
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "family": family,
            "params": plane.params(),
            "s": s,
            "a_dim": report.a_dim,
            "tangent_dim": report.tangent_dim,
            "system_size": report.system_size,
            "component_dim": component,
        })),
    })
}

pub fn degree(mode: &str, args: &[(&str, i64)], value: BigInt, fmt: Format) -> Out {
    Ok(match fmt {
        Format::Text => format!("{value}\n"),
        Format::Csv => {
            let mut header = vec!["mode"];
            header.extend(args.iter().map(|(name, _)| *name));
            header.push("degree");
            let mut row = vec![mode.to_string()];
            row.extend(args.iter().map(|(_, v)| v.to_string()));
            row.push(value.to_string());
            to_csv(&header, &[row])
        }
        Format::Json => {
            let arg_map: serde_json::Map<String, serde_json::Value> =
                args.iter().map(|(name, v)| (name.to_string(), json!(v))).collect();
            to_json(&json!({
                "schema": SCHEMA,
                "mode": mode,
                "args": arg_map,
                "degree": value.to_string(),
            }))
        }
    })
}

pub fn membership(text: &str, r: usize, family: Family, fmt: Format) -> Out {
    let mat = read_kplane(text)?;
    let inside = plane_in_scheme(&mat, r, family)?;
    Ok(match fmt {
        Format::Text => format!("{inside}\n"),
        Format::Csv => to_csv(
            &["family", "r", "in_scheme"],
            &[vec![family.to_string(), r.to_string(), inside.to_string()]],
        ),
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "family": family,
            "r": r,
            "in_scheme": inside,
        })),
    })
}

use std::path::Path;

use ramsey_cema::certify::{
    deletion_closure_check, is_certificate_text, load_fixture, parse_certificate, verify_critical,
    Verdict,
};
use ramsey_cema::graph::{parse_matrix_with_colors, EdgeColoring};
use ramsey_cema::pattern::{PatternGraph, PatternRegistry};

use crate::{EXIT_NOT_CRITICAL, EXIT_OK};

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_specs(specs: &[String]) -> Result<Vec<PatternGraph>, String> {
    specs
        .iter()
        .map(|s| PatternGraph::parse(s).map_err(|e| e.to_string()))
        .collect()
}

/// Loads a coloring from a certificate file or a bare matrix. Patterns listed
/// on the command line take precedence over those recorded in a certificate.
fn load_input(path: &Path, specs: &[String]) -> Result<(EdgeColoring, Vec<PatternGraph>), String> {
    let text = read(path)?;
    if is_certificate_text(&text) {
        let file =
            parse_certificate(&text, PatternRegistry::builtin()).map_err(|e| e.to_string())?;
        let patterns = if specs.is_empty() {
            file.patterns
        } else {
            parse_specs(specs)?
        };
        return Ok((file.coloring, patterns));
    }
    if specs.is_empty() {
        return Err("a bare matrix needs one --pattern per color".into());
    }
    let patterns = parse_specs(specs)?;
    let coloring =
        parse_matrix_with_colors(&text, patterns.len().max(2)).map_err(|e| e.to_string())?;
    Ok((coloring, patterns))
}

pub fn verify(
    path: Option<&Path>,
    fixture: Option<&str>,
    specs: &[String],
    closure: bool,
) -> Result<u8, String> {
    let (coloring, patterns) = match (path, fixture) {
        (_, Some(name)) => {
            let (c, p) = load_fixture(name).map_err(|e| e.to_string())?;
            (
                c,
                if specs.is_empty() {
                    p
                } else {
                    parse_specs(specs)?
                },
            )
        }
        (Some(path), None) => load_input(path, specs)?,
        (None, None) => return Err("give a path or --fixture".into()),
    };
    let cert = verify_critical(&coloring, &patterns).map_err(|e| e.to_string())?;
    println!("verdict: {}", cert.verdict);
    for (color, (p, k)) in patterns.iter().zip(&cert.counts.per_color).enumerate() {
        println!("color {color} {p}: {k}");
    }
    if let Some(w) = &cert.witness {
        let vs: Vec<String> = w.vertices.iter().map(usize::to_string).collect();
        println!(
            "witness: color {} {} on vertices {}",
            w.color,
            patterns[usize::from(w.color)],
            vs.join(" ")
        );
        return Ok(EXIT_NOT_CRITICAL);
    }
    if closure {
        let closed = deletion_closure_check(&cert).map_err(|e| e.to_string())?;
        println!("deletion closure: {}", if closed { "ok" } else { "failed" });
        if !closed {
            return Ok(EXIT_NOT_CRITICAL);
        }
    }
    if let Some(bound) = &cert.implied_bound {
        println!("{bound}");
    }
    debug_assert_eq!(cert.verdict, Verdict::Critical);
    Ok(EXIT_OK)
}

pub fn count(path: &Path, spec: &str, color: u8, colors: usize) -> Result<u8, String> {
    let pattern = PatternGraph::parse(spec).map_err(|e| e.to_string())?;
    let text = read(path)?;
    let coloring = if is_certificate_text(&text) {
        parse_certificate(&text, PatternRegistry::builtin())
            .map_err(|e| e.to_string())?
            .coloring
    } else {
        parse_matrix_with_colors(&text, colors).map_err(|e| e.to_string())?
    };
    if usize::from(color) >= coloring.m() {
        return Err(format!(
            "--color {color} is out of range for {} colors",
            coloring.m()
        ));
    }
    let host = coloring
        .monochrome_graph(color)
        .map_err(|e| e.to_string())?;
    println!("{}", pattern.count(&host).map_err(|e| e.to_string())?);
    Ok(EXIT_OK)
}

//! Long-format error surface (and an optional SVG heatmap) from a sweep CSV.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::BenchError;

pub const SURFACE_HEADER: [&str; 5] = ["sigma", "alpha", "maturity", "abs_err", "rel_err"];

#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub sigma: f64,
    pub alpha: f64,
    pub maturity: f64,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
}

fn parse_num(s: &str, column: &str) -> Result<Option<f64>, BenchError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| BenchError::MissingColumn(format!("{column}: unparseable value '{s}'")))
}

/// Extracts the semiclassical rows of a sweep CSV.
pub fn read_surface<R: Read>(input: R) -> Result<Vec<SurfacePoint>, BenchError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| BenchError::MissingColumn(name.to_string()))
    };
    let (sigma, alpha, maturity, engine, abs_err, rel_err) = (
        col("sigma")?,
        col("alpha")?,
        col("maturity")?,
        col("engine")?,
        col("abs_err")?,
        col("rel_err")?,
    );
    let mut points = Vec::new();
    let mut rows = 0usize;
    let mut saw_benchmark = false;
    for rec in rdr.records() {
        let rec = rec?;
        rows += 1;
        let get = |i: usize| rec.get(i).unwrap_or("");
        match get(engine) {
            "ncx2" => saw_benchmark = true,
            "semiclassical" => {
                let need = |i: usize, name: &str| {
                    parse_num(get(i), name)?.ok_or_else(|| BenchError::MissingColumn(format!("{name}: empty value")))
                };
                points.push(SurfacePoint {
                    sigma: need(sigma, "sigma")?,
                    alpha: need(alpha, "alpha")?,
                    maturity: need(maturity, "maturity")?,
                    abs_err: parse_num(get(abs_err), "abs_err")?,
                    rel_err: parse_num(get(rel_err), "rel_err")?,
                });
            }
            _ => {}
        }
    }
    if rows > 0 && points.is_empty() {
        return Err(BenchError::MissingColumn("semiclassical rows".into()));
    }
    if rows > 0 && !saw_benchmark {
        return Err(BenchError::MissingColumn("ncx2 rows".into()));
    }
    Ok(points)
}

pub fn write_surface_csv<W: Write>(points: &[SurfacePoint], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SURFACE_HEADER)?;
    let f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for p in points {
        w.write_record([
            p.sigma.to_string(),
            p.alpha.to_string(),
            p.maturity.to_string(),
            f(p.abs_err),
            f(p.rel_err),
        ])?;
    }
    w.flush().map_err(|e| BenchError::io("surface output", e))?;
    Ok(())
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// One heatmap panel of relative error per maturity: alpha across, sigma down.
pub fn render_svg(points: &[SurfacePoint]) -> String {
    const CELL: f64 = 48.0;
    const MARGIN: f64 = 60.0;
    let maturities = distinct(points.iter().map(|p| p.maturity));
    let sigmas = distinct(points.iter().map(|p| p.sigma));
    let alphas = distinct(points.iter().map(|p| p.alpha));
    let panel_w = MARGIN + CELL * alphas.len() as f64 + 20.0;
    let panel_h = MARGIN + CELL * sigmas.len() as f64 + 20.0;
    let width = panel_w * maturities.len().max(1) as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{panel_h}" font-family="sans-serif" font-size="10">"#
    );
    for (k, &t) in maturities.iter().enumerate() {
        let x0 = k as f64 * panel_w;
        let panel: Vec<&SurfacePoint> = points.iter().filter(|p| p.maturity == t).collect();
        let max = panel.iter().filter_map(|p| p.rel_err).fold(0.0f64, f64::max);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="14">T={t} (max rel_err {:.4})</text>"#,
            x0 + MARGIN,
            max
        );
        for (i, &s) in sigmas.iter().enumerate() {
            let y = MARGIN + CELL * i as f64;
            let _ = writeln!(svg, r#"<text x="{}" y="{}">s={s}</text>"#, x0 + 4.0, y + CELL / 2.0);
            for (j, &a) in alphas.iter().enumerate() {
                let x = x0 + MARGIN + CELL * j as f64;
                if i == 0 {
                    let _ = writeln!(svg, r#"<text x="{x}" y="{}">a={a}</text>"#, MARGIN - 6.0);
                }
                let value = panel
                    .iter()
                    .find(|p| p.sigma == s && p.alpha == a)
                    .and_then(|p| p.rel_err);
                let fill = match value {
                    Some(v) if max > 0.0 => {
                        let shade = (255.0 * (1.0 - v / max)).round() as u8;
                        format!("rgb(255,{shade},{shade})")
                    }
                    Some(_) => "rgb(255,255,255)".to_string(),
                    None => "rgb(200,200,200)".to_string(),
                };
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="black" stroke-width="0.5"><title>{}</title></rect>"#,
                    value.map_or("n/a".to_string(), |v| format!("{v:.4e}"))
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Reads a sweep CSV, writes the long-format surface and optionally an SVG heatmap.
pub fn emit_error_surface(input: &Path, out: &Path, svg: Option<&Path>) -> Result<Vec<SurfacePoint>, BenchError> {
    let file = std::fs::File::open(input).map_err(|e| BenchError::io(input.display().to_string(), e))?;
    let points = read_surface(file)?;
    let file = std::fs::File::create(out).map_err(|e| BenchError::io(out.display().to_string(), e))?;
    write_surface_csv(&points, file)?;
    if let Some(path) = svg {
        std::fs::write(path, render_svg(&points)).map_err(|e| BenchError::io(path.display().to_string(), e))?;
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWEEP: &str = "sigma,alpha,maturity,engine,price,abs_err,rel_err,time_ns,diagnostics\n\
        0.5,1.45,0.5,semiclassical,1.34,0.07,0.05,100,\n\
        0.5,1.45,0.5,ncx2,1.41,,,900,\n";

    #[test]
    fn extracts_semiclassical_rows() {
        let pts = read_surface(SWEEP.as_bytes()).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].rel_err, Some(0.05));
        let mut out = Vec::new();
        write_surface_csv(&pts, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "sigma,alpha,maturity,abs_err,rel_err\n0.5,1.45,0.5,0.07,0.05\n"
        );
    }

    #[test]
    fn header_only_input_gives_empty_surface() {
        let pts =
            read_surface("sigma,alpha,maturity,engine,price,abs_err,rel_err,time_ns,diagnostics\n".as_bytes()).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn missing_columns_and_engines() {
        let err = read_surface("sigma,alpha,engine,abs_err,rel_err\n".as_bytes()).unwrap_err();
        assert!(matches!(err, BenchError::MissingColumn(ref c) if c == "maturity"));
        let only_sc = "sigma,alpha,maturity,engine,abs_err,rel_err\n0.5,1.45,0.5,semiclassical,,\n";
        assert!(matches!(
            read_surface(only_sc.as_bytes()),
            Err(BenchError::MissingColumn(_))
        ));
    }

    #[test]
    fn svg_has_one_cell_per_point() {
        let pts = read_surface(SWEEP.as_bytes()).unwrap();
        let svg = render_svg(&pts);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<rect").count(), 1);
    }
}

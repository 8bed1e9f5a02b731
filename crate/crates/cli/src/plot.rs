//! SVG pictures of planar complexes: the grid, the forbidden region as hole
//! boxes, and the edges and vertices of the complex.

use std::fmt::Write;

use pvtopo::{holes_of, EuclideanComplex};

use crate::CliError;

const UNIT: i64 = 40;
const MARGIN: i64 = 20;

pub fn svg(k: &EuclideanComplex) -> Result<String, CliError> {
    if k.n() != 2 {
        return Err(CliError::Input(format!(
            "plot supports n = 2 only, got n = {}",
            k.n()
        )));
    }
    let w = k.window();
    let (width, height) = ((w.hi[0] - w.lo[0]) * UNIT, (w.hi[1] - w.lo[1]) * UNIT);
    // y grows upwards
    let px = |x: i64| MARGIN + (x - w.lo[0]) * UNIT;
    let py = |y: i64| MARGIN + height - (y - w.lo[1]) * UNIT;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {0} {1}">"#,
        width + 2 * MARGIN,
        height + 2 * MARGIN
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for x in w.lo[0]..=w.hi[0] {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{0}" y2="{}"/>"#,
            px(x),
            py(w.lo[1]),
            py(w.hi[1])
        );
    }
    for y in w.lo[1]..=w.hi[1] {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{1}"/>"#,
            px(w.lo[0]),
            py(y),
            px(w.hi[0])
        );
    }
    s.push_str("</g>\n");

    let _ = writeln!(
        s,
        r##"<g fill="#c0392b" fill-opacity="0.35" stroke="#c0392b">"##
    );
    match holes_of(k) {
        Ok(h) => {
            for b in h.holes() {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                    px(b.lo[0]),
                    py(b.hi[1]),
                    (b.hi[0] - b.lo[0]) * UNIT,
                    (b.hi[1] - b.lo[1]) * UNIT
                );
            }
        }
        // open shell: shade the missing squares instead
        Err(_) => {
            for x in w.lo[0]..w.hi[0] {
                for y in w.lo[1]..w.hi[1] {
                    if !k.contains_half(&[2 * x + 1, 2 * y + 1]) {
                        let _ = writeln!(
                            s,
                            r#"<rect x="{}" y="{}" width="{UNIT}" height="{UNIT}" stroke="none"/>"#,
                            px(x),
                            py(y + 1)
                        );
                    }
                }
            }
        }
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, r##"<g stroke="#222222" stroke-width="2">"##);
    for c in k.cubes().filter(|c| c.dim() == 1) {
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            px(c.lo[0]),
            py(c.lo[1]),
            px(c.hi[0]),
            py(c.hi[1])
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, r##"<g fill="#222222">"##);
    for c in k.cubes().filter(|c| c.dim() == 0) {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3"/>"#,
            px(c.lo[0]),
            py(c.lo[1])
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pvtopo::{from_holes, HoleSet, IntBox, OpenBox};

    #[test]
    fn corner_holes_picture() {
        let h = HoleSet::new(
            2,
            vec![
                OpenBox::new(vec![1, 2], vec![2, 3]).unwrap(),
                OpenBox::new(vec![2, 1], vec![3, 2]).unwrap(),
            ],
        )
        .unwrap();
        let k = from_holes(&h, &IntBox::cube(2, 0, 4).unwrap()).unwrap();
        let out = svg(&k).unwrap();
        assert!(out.starts_with("<svg"));
        assert_eq!(out.matches("<rect x=").count(), 2);
        assert_eq!(out.matches("<circle").count(), k.counts_by_dim()[0]);
    }

    #[test]
    fn only_planar() {
        let k = EuclideanComplex::full(IntBox::cube(3, 0, 1).unwrap());
        assert!(svg(&k).is_err());
    }
}

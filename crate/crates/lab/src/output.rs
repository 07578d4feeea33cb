//! CSV and SVG emission.

use std::fmt::Write as _;
use std::io::{Read, Write};

use formation_core::motion::Trajectory;
use formation_core::Vec2d;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub type CsvResult<T> = Result<T, csv::Error>;

/// One robot at one slot. Robot ids start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub slot: usize,
    pub robot_id: usize,
    pub x: f64,
    pub y: f64,
}

pub fn trajectory_rows(t: &Trajectory) -> Vec<TrajectoryRow> {
    t.states
        .iter()
        .flat_map(|s| {
            s.robots.iter().map(move |r| TrajectoryRow {
                slot: s.slot,
                robot_id: r.id + 1,
                x: r.position.x,
                y: r.position.y,
            })
        })
        .collect()
}

/// Serialize records with a header row. Floats are written in shortest
/// round-trip form, so reading the output back gives identical values.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> CsvResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read, T: DeserializeOwned>(input: R) -> CsvResult<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> CsvResult<Vec<u8>> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(buf)
}

/// Static picture of a run: paths in grey, start positions hollow, end
/// positions filled, destinations as crosses.
pub fn trajectory_svg(t: &Trajectory, destinations: &[Vec2d]) -> String {
    let mut pts: Vec<Vec2d> = t.states.iter().flat_map(|s| s.robots.iter().map(|r| r.position)).collect();
    pts.extend_from_slice(destinations);
    let (mut lo, mut hi) = (Vec2d::new(f64::MAX, f64::MAX), Vec2d::new(f64::MIN, f64::MIN));
    for p in &pts {
        lo = Vec2d::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2d::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1.0);
    let (x0, y0) = (lo.x - pad, lo.y - pad);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let dot = 0.006 * w.max(h);
    // flip y so that up is up
    let fy = |y: f64| y0 + h - (y - y0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.3} {y0:.3} {w:.3} {h:.3}" width="800" height="{:.0}">"#,
        800.0 * h / w
    );
    let _ = writeln!(s, r#"<rect x="{x0:.3}" y="{y0:.3}" width="{w:.3}" height="{h:.3}" fill="white"/>"#);
    let n = t.final_state().robots.len();
    for i in 0..n {
        let path: Vec<String> = t
            .states
            .iter()
            .map(|st| format!("{:.3},{:.3}", st.robots[i].position.x, fy(st.robots[i].position.y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="grey" stroke-width="{:.3}"/>"#,
            path.join(" "),
            dot / 3.0
        );
    }
    for d in destinations {
        let (x, y) = (d.x, fy(d.y));
        let _ = writeln!(
            s,
            r#"<path d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" stroke="red" stroke-width="{:.3}"/>"#,
            x - dot,
            y - dot,
            x + dot,
            y + dot,
            x - dot,
            y + dot,
            x + dot,
            y - dot,
            dot / 3.0
        );
    }
    for r in &t.states[0].robots {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{dot:.3}" fill="none" stroke="black" stroke-width="{:.3}"/>"#,
            r.position.x,
            fy(r.position.y),
            dot / 3.0
        );
    }
    for r in &t.final_state().robots {
        let _ =
            writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="{dot:.3}" fill="blue"/>"#, r.position.x, fy(r.position.y));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{ComparisonRow, SweepRow};

    #[test]
    fn rows_round_trip_exactly() {
        let rows = vec![
            SweepRow { param: 0.1, mean_bias: 1.0 / 3.0, std_bias: 0.0, bound: 2.150_095_206_999_840_8e-1 },
            SweepRow { param: 1e-300, mean_bias: f64::MAX, std_bias: 5e-324, bound: 7.0 },
        ];
        let bytes = csv_bytes(&rows).unwrap();
        assert!(bytes.starts_with(b"param,mean_bias,std_bias,bound\n"));
        assert_eq!(read_csv::<_, SweepRow>(&bytes[..]).unwrap(), rows);

        let cmp = vec![ComparisonRow { trial: 0, hungarian: 1.5, fixed: 2.25, random: 1e9 + 0.1 }];
        let bytes = csv_bytes(&cmp).unwrap();
        assert!(bytes.starts_with(b"trial,hungarian,fixed,random\n"));
        assert_eq!(read_csv::<_, ComparisonRow>(&bytes[..]).unwrap(), cmp);
    }
}

//! Distance-matrix and edge-list files.
//!
//! Matrix files (`.csv`): the first line is `n`, followed by `n` rows of `n`
//! comma-separated reals. Edge lists (`.tsv`, `.edges`): one `u v w` edge per
//! line, whitespace separated, `#` starts a comment. Endpoints that all parse
//! as integers are point indices; anything else is treated as a label.
//! Point files (`.pts`): a `p <exponent>` line (`inf` allowed), then one
//! point per line as whitespace-separated coordinates, optionally preceded
//! by a label; distances are `l_p` and the coordinates stay attached.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::metric::{
    from_graph, from_labeled_graph, from_lp_points, validate_metric, Embedding, FiniteMetricSpace,
    MetricError,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cannot infer the format of {0}; pass --format matrix, edges or points")]
    UnknownFormat(PathBuf),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Matrix,
    EdgeList,
    Points,
}

impl InputFormat {
    /// `.csv` is a matrix, `.tsv` and `.edges` are edge lists, `.pts` is a
    /// point file.
    pub fn detect(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(InputFormat::Matrix),
            "tsv" | "edges" => Some(InputFormat::EdgeList),
            "pts" => Some(InputFormat::Points),
            _ => None,
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matrix" | "csv" => Ok(InputFormat::Matrix),
            "edges" | "edge-list" | "tsv" => Ok(InputFormat::EdgeList),
            "points" | "pts" => Ok(InputFormat::Points),
            _ => Err(format!(
                "unknown format {s:?} (expected matrix, edges or points)"
            )),
        }
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, IoError> {
    tok.trim().parse().map_err(|_| IoError::Parse {
        line,
        msg: format!("not a number: {:?}", tok.trim()),
    })
}

/// Rows of a matrix file. Shape problems beyond the row count are left to
/// [`validate_metric`].
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or(IoError::Parse {
        line: 1,
        msg: "empty matrix file".into(),
    })?;
    let n: usize = header.parse().map_err(|_| IoError::Parse {
        line: first,
        msg: format!("expected the point count, found {header:?}"),
    })?;
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        let row = l
            .split(',')
            .map(|t| parse_f64(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(IoError::Parse {
            line: first,
            msg: format!("header says {n} rows, found {}", rows.len()),
        });
    }
    Ok(rows)
}

/// Matrix file text, every entry with 17 significant digits.
pub fn format_matrix(space: &FiniteMetricSpace) -> String {
    let n = space.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.16e}", space.d(i, j));
        }
        out.push('\n');
    }
    out
}

/// `(u, v, w)` edges with endpoint tokens as written.
pub fn parse_edge_list(text: &str) -> Result<Vec<(String, String, f64)>, IoError> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(IoError::Parse {
                line,
                msg: format!("expected `u v w`, found {} fields", toks.len()),
            });
        }
        edges.push((
            toks[0].to_string(),
            toks[1].to_string(),
            parse_f64(toks[2], line)?,
        ));
    }
    Ok(edges)
}

/// Edge-list text for a complete graph on the space, with labels as
/// endpoint names when present.
pub fn format_edge_list(space: &FiniteMetricSpace) -> String {
    let mut out = String::from("# u v w\n");
    for i in 0..space.n() {
        for j in i + 1..space.n() {
            let _ = writeln!(
                out,
                "{} {} {:.16e}",
                space.label(i),
                space.label(j),
                space.d(i, j)
            );
        }
    }
    out
}

/// Builds the graph metric of an edge list.
pub fn space_from_edges(edges: &[(String, String, f64)]) -> Result<FiniteMetricSpace, IoError> {
    let numeric: Option<Vec<(usize, usize, f64)>> = edges
        .iter()
        .map(|(u, v, w)| Some((u.parse().ok()?, v.parse().ok()?, *w)))
        .collect();
    Ok(match numeric {
        Some(e) => from_graph(&e)?,
        None => from_labeled_graph(edges)?,
    })
}

/// Exponent, optional labels and coordinates of a point file.
pub type PointFile = (f64, Option<Vec<String>>, Vec<Vec<f64>>);

pub fn parse_points(text: &str) -> Result<PointFile, IoError> {
    let mut p = None;
    let mut labels = Vec::new();
    let mut coords = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if p.is_none() {
            p = match toks.as_slice() {
                ["p", "inf"] | ["p", "infinity"] => Some(f64::INFINITY),
                ["p", v] => Some(parse_f64(v, line)?),
                _ => {
                    return Err(IoError::Parse {
                        line,
                        msg: "expected the exponent line `p <value>`".into(),
                    })
                }
            };
            continue;
        }
        let (label, nums) = match toks[0].parse::<f64>() {
            Ok(_) => (None, &toks[..]),
            Err(_) => (Some(toks[0].to_string()), &toks[1..]),
        };
        if !coords.is_empty() && label.is_some() != (labels.len() == coords.len()) {
            return Err(IoError::Parse {
                line,
                msg: "label some points but not others".into(),
            });
        }
        labels.extend(label);
        coords.push(
            nums.iter()
                .map(|t| parse_f64(t, line))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let p = p.ok_or(IoError::Parse {
        line: 1,
        msg: "empty point file".into(),
    })?;
    let labels = (!labels.is_empty()).then_some(labels);
    Ok((p, labels, coords))
}

/// Point-file text for a space with an `l_p` embedding.
pub fn format_points(space: &FiniteMetricSpace) -> Option<String> {
    let Some(Embedding::Lp { p, coords }) = space.embedding() else {
        return None;
    };
    let mut out = if p.is_infinite() {
        "p inf\n".to_string()
    } else {
        format!("p {p}\n")
    };
    for (i, c) in coords.iter().enumerate() {
        if space.labels().is_some() {
            out.push_str(&space.label(i));
        }
        for (l, x) in c.iter().enumerate() {
            if l > 0 || space.labels().is_some() {
                out.push(' ');
            }
            let _ = write!(out, "{x:.16e}");
        }
        out.push('\n');
    }
    Some(out)
}

pub fn space_from_points(file: PointFile) -> Result<FiniteMetricSpace, IoError> {
    let (p, labels, coords) = file;
    let space = from_lp_points(coords, p)?;
    Ok(match labels {
        Some(l) => space.with_labels(l)?,
        None => space,
    })
}

/// A space read from disk.
#[derive(Debug, Clone)]
pub struct LoadedSpace {
    pub space: FiniteMetricSpace,
    pub format: InputFormat,
    /// Longest edge of an edge-list input.
    pub max_edge: Option<f64>,
    /// Original point -> collapsed point, when duplicates were merged.
    pub collapsed: Option<Vec<usize>>,
}

/// Reads and validates a space. With `pseudo`, zero distances between
/// distinct points are admitted and the duplicates merged.
pub fn load_space(
    path: &Path,
    format: Option<InputFormat>,
    pseudo: bool,
) -> Result<LoadedSpace, IoError> {
    let format = match format.or_else(|| InputFormat::detect(path)) {
        Some(f) => f,
        None => return Err(IoError::UnknownFormat(path.to_path_buf())),
    };
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    match format {
        InputFormat::Matrix => {
            let rows = parse_matrix(&text)?;
            let space = validate_metric(&rows, pseudo)?;
            let (space, collapsed) = if pseudo && !space.zero_pairs().is_empty() {
                let (s, c) = space.collapse_duplicates();
                (s, Some(c))
            } else {
                (space, None)
            };
            Ok(LoadedSpace {
                space,
                format,
                max_edge: None,
                collapsed,
            })
        }
        InputFormat::EdgeList => {
            let edges = parse_edge_list(&text)?;
            let space = space_from_edges(&edges)?;
            let max_edge = edges
                .iter()
                .map(|e| e.2)
                .fold(None, |m: Option<f64>, w| Some(m.map_or(w, |m| m.max(w))));
            Ok(LoadedSpace {
                space,
                format,
                max_edge,
                collapsed: None,
            })
        }
        InputFormat::Points => {
            let space = space_from_points(parse_points(&text)?)?;
            Ok(LoadedSpace {
                space,
                format,
                max_edge: None,
                collapsed: None,
            })
        }
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Violation;

    #[test]
    fn matrix_round_trip_is_lossless() {
        let rows = vec![
            vec![0.0, 0.1, 1.0 / 3.0],
            vec![0.1, 0.0, 0.3],
            vec![1.0 / 3.0, 0.3, 0.0],
        ];
        let s = validate_metric(&rows, false).unwrap();
        let text = format_matrix(&s);
        assert!(text.starts_with("3\n"));
        assert_eq!(parse_matrix(&text).unwrap(), rows);
    }

    #[test]
    fn matrix_errors_name_lines() {
        assert!(matches!(parse_matrix(""), Err(IoError::Parse { .. })));
        assert!(matches!(
            parse_matrix("two\n0"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_matrix("2\n0,1\n1,x"),
            Err(IoError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_matrix("3\n0,1\n1,0"),
            Err(IoError::Parse { .. })
        ));
        // ragged rows parse; validation reports them
        let rows = parse_matrix("2\n0,1\n1").unwrap();
        assert!(matches!(
            validate_metric(&rows, false),
            Err(MetricError::Invalid(v)) if matches!(v[0], Violation::NotSquare { .. })
        ));
    }

    #[test]
    fn edge_lists_accept_indices_and_labels() {
        let e = parse_edge_list("# tree\n0 1 1.0\n1 2 2 # heavy\n\n").unwrap();
        let s = space_from_edges(&e).unwrap();
        assert_eq!(s.d(0, 2), 3.0);
        let e = parse_edge_list("a b 1\nb c 1\n").unwrap();
        let s = space_from_edges(&e).unwrap();
        assert_eq!(s.label(2), "c");
        assert_eq!(s.d(0, 2), 2.0);
        assert!(matches!(
            parse_edge_list("0 1"),
            Err(IoError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn format_detection() {
        assert_eq!(
            InputFormat::detect(Path::new("a/b.csv")),
            Some(InputFormat::Matrix)
        );
        assert_eq!(
            InputFormat::detect(Path::new("x.EDGES")),
            Some(InputFormat::EdgeList)
        );
        assert_eq!(
            InputFormat::detect(Path::new("x.tsv")),
            Some(InputFormat::EdgeList)
        );
        assert_eq!(
            InputFormat::detect(Path::new("x.pts")),
            Some(InputFormat::Points)
        );
        assert_eq!(InputFormat::detect(Path::new("x.txt")), None);
        assert_eq!("edges".parse::<InputFormat>(), Ok(InputFormat::EdgeList));
    }

    #[test]
    fn edge_list_round_trip() {
        let e = parse_edge_list("x y 0.5\ny z 0.25\n").unwrap();
        let s = space_from_edges(&e).unwrap();
        let back = space_from_edges(&parse_edge_list(&format_edge_list(&s)).unwrap()).unwrap();
        assert_eq!(back.as_flat(), s.as_flat());
        assert_eq!(back.labels(), s.labels());
    }

    #[test]
    fn point_files() {
        let (p, labels, coords) = parse_points("# plane\np 4\nA 0 1\nB -1 0 # left\n").unwrap();
        assert_eq!(p, 4.0);
        assert_eq!(labels, Some(vec!["A".to_string(), "B".to_string()]));
        assert_eq!(coords, vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let (p, labels, _) = parse_points("p inf\n0 0\n1 2\n").unwrap();
        assert!(p.is_infinite() && labels.is_none());
        assert!(matches!(
            parse_points("0 0\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_points("p 3\nA 0 0\n1 1\n"),
            Err(IoError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            space_from_points(parse_points("p 3\n0 0\n1\n").unwrap()),
            Err(IoError::Metric(_))
        ));
    }

    #[test]
    fn point_file_round_trip() {
        for text in [
            "p 4\nA' 0 1.3\nB -1 0\nC 1 0\n",
            "p inf\n0.1 0.2 0.3\n1 2 3\n",
        ] {
            let s = space_from_points(parse_points(text).unwrap()).unwrap();
            let again = format_points(&s).unwrap();
            let back = space_from_points(parse_points(&again).unwrap()).unwrap();
            assert_eq!(back, s);
        }
        let m = validate_metric(&[vec![0.0, 1.0], vec![1.0, 0.0]], false).unwrap();
        assert!(format_points(&m).is_none());
    }
}

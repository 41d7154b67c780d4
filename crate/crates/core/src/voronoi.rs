//! Voronoi cell areas of sites in a square, by half-plane clipping.

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Keeps the part of `poly` where `normal · p <= offset` (Sutherland–Hodgman).
fn clip(poly: &[Point], normal: Point, offset: f64) -> Vec<Point> {
    let side = |p: &Point| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (idx, cur) in poly.iter().enumerate() {
        let prev = &poly[(idx + poly.len() - 1) % poly.len()];
        let (dc, dp) = (side(cur), side(prev));
        if dc <= 0.0 {
            if dp > 0.0 {
                out.push(intersect(prev, cur, dp, dc));
            }
            out.push(*cur);
        } else if dp <= 0.0 {
            out.push(intersect(prev, cur, dp, dc));
        }
    }
    out
}

fn intersect(a: &Point, b: &Point, da: f64, db: f64) -> Point {
    let t = da / (da - db);
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Shoelace formula; positive for counter-clockwise polygons.
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    0.5 * twice
}

fn dist2(a: &Point, b: &Point) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Cell of site `i` clipped to `[0, side]^2`.
pub fn voronoi_cell(sites: &[Point], i: usize, side: f64) -> Result<Vec<Point>> {
    let p = sites[i];
    let mut cell = vec![[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]];
    let mut others: Vec<(f64, usize)> =
        sites.iter().enumerate().filter(|(j, _)| *j != i).map(|(j, s)| (dist2(&p, s), j)).collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    for (d2, j) in others {
        if d2 == 0.0 {
            return Err(Error::DegenerateCell(i));
        }
        // sites farther than twice the cell radius cannot cut the cell
        let radius2 = cell.iter().map(|v| dist2(&p, v)).fold(0.0, f64::max);
        if d2 > 4.0 * radius2 {
            break;
        }
        let q = sites[j];
        let normal = [q[0] - p[0], q[1] - p[1]];
        let offset = 0.5 * (q[0] * q[0] + q[1] * q[1] - p[0] * p[0] - p[1] * p[1]);
        cell = clip(&cell, normal, offset);
        if cell.len() < 3 {
            return Err(Error::DegenerateCell(i));
        }
    }
    Ok(cell)
}

/// Area of every site's Voronoi cell within `[0, side]^2`.
pub fn cell_areas(sites: &[Point], side: f64) -> Result<Vec<f64>> {
    (0..sites.len())
        .map(|i| {
            let area = polygon_area(&voronoi_cell(sites, i, side)?);
            if area > 0.0 {
                Ok(area)
            } else {
                Err(Error::DegenerateCell(i))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_owns_the_square() {
        assert_eq!(cell_areas(&[[3.0, 7.0]], 10.0).unwrap(), vec![100.0]);
    }

    #[test]
    fn quadrant_centers() {
        let sites = [[2.5, 2.5], [7.5, 2.5], [2.5, 7.5], [7.5, 7.5]];
        for a in cell_areas(&sites, 10.0).unwrap() {
            assert!((a - 25.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_sites_split_at_bisector() {
        let areas = cell_areas(&[[1.0, 5.0], [5.0, 5.0]], 10.0).unwrap();
        assert!((areas[0] - 30.0).abs() < 1e-12);
        assert!((areas[1] - 70.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_sites_are_degenerate() {
        assert_eq!(cell_areas(&[[1.0, 1.0], [1.0, 1.0]], 10.0), Err(Error::DegenerateCell(0)));
    }

    #[test]
    fn shoelace_orientation() {
        let sq = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        assert_eq!(polygon_area(&sq), 4.0);
        let rev: Vec<Point> = sq.iter().rev().copied().collect();
        assert_eq!(polygon_area(&rev), -4.0);
    }
}

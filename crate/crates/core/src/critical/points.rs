use crate::linalg;
use crate::poly::C64;

/// Greedy clustering: each point joins the first cluster whose mean lies
/// within `tol`, then clusters with means closer than `tol` are merged until
/// none remain. Returns member indices per cluster, ordered by first member.
pub fn cluster_points(points: &[Vec<C64>], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<(Vec<usize>, Vec<C64>)> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match clusters.iter_mut().find(|(_, m)| linalg::distance(m, p) < tol) {
            Some((members, m)) => {
                members.push(i);
                *m = mean_of(points, members);
            }
            None => clusters.push((vec![i], p.clone())),
        }
    }
    loop {
        let mut pair = None;
        'outer: for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                if linalg::distance(&clusters[a].1, &clusters[b].1) < tol {
                    pair = Some((a, b));
                    break 'outer;
                }
            }
        }
        let Some((a, b)) = pair else { break };
        let (members, _) = clusters.remove(b);
        clusters[a].0.extend(members);
        clusters[a].0.sort_unstable();
        clusters[a].1 = mean_of(points, &clusters[a].0);
    }
    clusters.into_iter().map(|(m, _)| m).collect()
}

pub(crate) fn mean_of(points: &[Vec<C64>], members: &[usize]) -> Vec<C64> {
    let n = points[members[0]].len();
    let w = 1.0 / members.len() as f64;
    let mut m = vec![C64::new(0.0, 0.0); n];
    for &i in members {
        for (a, b) in m.iter_mut().zip(&points[i]) {
            *a += b * w;
        }
    }
    m
}

/// Cluster representatives (component-wise means) of [`cluster_points`].
pub fn dedup_points(points: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    cluster_points(points, tol).iter().map(|c| mean_of(points, c)).collect()
}

/// Two numerical approximations of the same limit point.
#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub best: Vec<C64>,
    pub previous: Vec<C64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealClassification {
    /// Real parts of points real in both approximations.
    pub real: Vec<Vec<f64>>,
    /// Index into the input for each entry of `real`.
    pub real_index: Vec<usize>,
    /// Points real in exactly one approximation.
    pub borderline: Vec<usize>,
}

fn is_real(p: &[C64], tol: f64) -> bool {
    p.iter().all(|z| z.im.abs() < tol)
}

/// A point is real when every imaginary part is below `tol` in both of its
/// approximations.
pub fn classify_real(points: &[Approximation], tol: f64) -> RealClassification {
    let mut out = RealClassification::default();
    for (i, p) in points.iter().enumerate() {
        match (is_real(&p.best, tol), is_real(&p.previous, tol)) {
            (true, true) => {
                out.real.push(p.best.iter().map(|z| z.re).collect());
                out.real_index.push(i);
            }
            (false, false) => {}
            _ => out.borderline.push(i),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn same(p: Vec<C64>) -> Approximation {
        Approximation { best: p.clone(), previous: p }
    }

    #[test]
    fn real_point_is_real() {
        let p = same(vec![c(1.0 / 48.0, 0.0), c(0.0, 0.0), c(-1.0 / 48.0, 0.0)]);
        let out = classify_real(&[p], 1e-6);
        assert_eq!(out.real, vec![vec![1.0 / 48.0, 0.0, -1.0 / 48.0]]);
    }

    #[test]
    fn complex_point_is_not_real() {
        let p = same(vec![c(-1.0 / 3.0, 5.0 / 9.0), c(10.0 / 9.0, 17.0 / 24.0), c(-3.0 / 8.0, 5.0 / 9.0)]);
        let out = classify_real(&[p], 1e-6);
        assert!(out.real.is_empty() && out.borderline.is_empty());
    }

    #[test]
    fn threshold_and_borderline() {
        let tol = 1e-6;
        let half = same(vec![c(0.5, tol / 2.0)]);
        let split = Approximation { best: vec![c(0.5, 0.0)], previous: vec![c(0.5, 2.0 * tol)] };
        let out = classify_real(&[half, split], tol);
        assert_eq!(out.real_index, vec![0]);
        assert_eq!(out.borderline, vec![1]);
    }

    #[test]
    fn dedup_examples() {
        let p = vec![c(1.0, 2.0), c(-0.5, 0.0)];
        let q: Vec<C64> = p.iter().map(|z| z + c(1e-9, 0.0)).collect();
        assert_eq!(dedup_points(&[p, q], 1e-6).len(), 1);
        assert!(dedup_points(&[], 1e-6).is_empty());
        let far: Vec<Vec<C64>> = (0..10).map(|k| vec![c(k as f64, -(k as f64))]).collect();
        assert_eq!(dedup_points(&far, 1e-6).len(), 10);
    }

    #[test]
    fn merge_pass_joins_chained_means() {
        // 0 and 0.9 cluster; the mean 0.45 is then within 1 of 1.3, which
        // started its own cluster before the mean moved.
        let pts: Vec<Vec<C64>> = [0.0, 1.3, 0.9].iter().map(|&x| vec![c(x, 0.0)]).collect();
        let out = dedup_points(&pts, 1.0);
        assert_eq!(out.len(), 1);
    }
}

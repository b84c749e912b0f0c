//! PACE `.td` files: `s td <bags> <width+1> <n>`, then `b <id> <v...>` lines
//! and bag-tree edges `<id> <id>`. Ids are 1-based.

use super::decomposition::TreeDecomposition;
use super::TwError;

fn err(line: usize, msg: impl Into<String>) -> TwError {
    TwError::Parse {
        line,
        msg: msg.into(),
    }
}

fn nums(line: usize, toks: &[&str]) -> Result<Vec<usize>, TwError> {
    toks.iter()
        .map(|t| t.parse::<usize>().map_err(|_| err(line, format!("not a number: {t}"))))
        .collect()
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, TwError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"s") => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(err(line, "expected `s td <bags> <width+1> <n>`"));
                }
                let h = nums(line, &toks[2..])?;
                header = Some((h[0], h[1], h[2]));
                bags = vec![None; h[0]];
            }
            Some(&"b") => {
                let (nb, cap, n) = header.ok_or_else(|| err(line, "bag before header"))?;
                let v = nums(line, &toks[1..])?;
                let id = *v.first().ok_or_else(|| err(line, "missing bag id"))?;
                if id == 0 || id > nb {
                    return Err(err(line, format!("bag id {id} out of range")));
                }
                let mut bag: Vec<usize> = v[1..].to_vec();
                if bag.iter().any(|&x| x == 0 || x > n) {
                    return Err(err(line, "vertex out of range"));
                }
                if bag.len() > cap {
                    return Err(err(line, "bag larger than declared width"));
                }
                bag.iter_mut().for_each(|x| *x -= 1);
                bag.sort_unstable();
                bag.dedup();
                if bags[id - 1].replace(bag).is_some() {
                    return Err(err(line, format!("bag {id} given twice")));
                }
            }
            Some(_) => {
                let (nb, _, _) = header.ok_or_else(|| err(line, "edge before header"))?;
                let v = nums(line, &toks)?;
                if v.len() != 2 || v.iter().any(|&x| x == 0 || x > nb) {
                    return Err(err(line, "expected two bag ids"));
                }
                edges.push((v[0] - 1, v[1] - 1));
            }
        }
    }
    let (_, _, n) = header.ok_or_else(|| err(0, "missing `s td` header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| err(0, format!("bag {} missing", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok(TreeDecomposition { n, bags, edges })
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags.len(), td.width() + 1, td.n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::DpvcInstance;
    use crate::treewidth::min_fill_tree_decomposition;

    #[test]
    fn round_trip() {
        let inst = DpvcInstance::pvc(5, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 4, 1), (4, 0, 3)]).unwrap();
        let td = min_fill_tree_decomposition(&inst);
        let back = parse_td(&write_td(&td)).unwrap();
        assert_eq!(back, td);
        back.validate(&inst).unwrap();
    }

    #[test]
    fn parse_example() {
        let text = "c path\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = parse_td(text).unwrap();
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(td.edges, vec![(0, 1)]);
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_td("b 1 1\n").is_err());
        assert!(parse_td("s td 1 1 2\nb 1 1 2\n").is_err());
        assert!(parse_td("s td 2 2 2\nb 1 1 2\n").is_err());
        assert!(matches!(parse_td("s td 1 2 2\nb 1 1 x\n"), Err(TwError::Parse { line: 2, .. })));
    }
}

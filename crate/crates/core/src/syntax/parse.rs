use std::collections::BTreeMap;

use num_traits::Zero;

use super::sexp::{read_all, read_one, Sexp};
use super::{Context, Formula, Operand};
use crate::error::{Error, Result};
use crate::opens::{Endpoint, OpenSet, Rat};
use crate::terms::{canon, generic, Grid, HFSet, Term};

/// Names bound by `(def NAME <term>)`.
pub type SymbolTable = BTreeMap<String, Term>;

fn rat_from_atom(s: &Sexp) -> Result<Rat> {
    let text = s.as_atom().ok_or_else(|| s.error("expected a rational"))?;
    let text = text.strip_prefix('+').unwrap_or(text);
    let bad = || s.error(format!("`{text}` is not a rational"));
    let q: Rat = text.parse().map_err(|_| bad())?;
    if let Some((_, den)) = text.split_once('/') {
        if den.parse::<num_bigint::BigInt>().map_or(true, |d| d.is_zero()) {
            return Err(bad());
        }
    }
    Ok(q)
}

fn endpoint_from(s: &Sexp) -> Result<Endpoint> {
    match s.as_atom() {
        Some("-inf") => Ok(Endpoint::NegInf),
        Some("+inf") | Some("inf") => Ok(Endpoint::PosInf),
        _ => rat_from_atom(s).map(Endpoint::Fin),
    }
}

fn opens_from(s: &Sexp) -> Result<OpenSet> {
    let (head, rest) = s.head().ok_or_else(|| s.error("expected (opens ...)"))?;
    if head != "opens" {
        return Err(s.error(format!("expected (opens ...), found `{head}`")));
    }
    let mut raw = Vec::with_capacity(rest.len());
    for iv in rest {
        match iv.head() {
            Some(("iv", [lo, hi])) => raw.push((endpoint_from(lo)?, endpoint_from(hi)?)),
            _ => return Err(iv.error("expected (iv <lo> <hi>)")),
        }
    }
    Ok(OpenSet::normalize(raw))
}

fn hf_from(s: &Sexp) -> Result<HFSet> {
    match s.head() {
        Some(("set", members)) => Ok(HFSet::set(members.iter().map(hf_from).collect::<Result<Vec<_>>>()?)),
        Some(("ratq", [q])) => Ok(HFSet::Atom(rat_from_atom(q)?)),
        _ => Err(s.error("expected (set ...) or (ratq <rat>)")),
    }
}

fn term_from(s: &Sexp, symbols: &SymbolTable) -> Result<Term> {
    if let Some(name) = s.as_atom() {
        let (line, col) = s.pos();
        return symbols.get(name).cloned().ok_or(Error::UnknownSymbol {
            name: name.to_string(),
            line,
            col,
        });
    }
    match s.head() {
        Some(("hat", [hf])) => Ok(canon(&hf_from(hf)?)),
        Some(("term", entries)) => {
            let mut open = Vec::new();
            let mut settled = Vec::new();
            for e in entries {
                match e.head() {
                    Some(("p", [child, region])) => open.push((term_from(child, symbols)?, opens_from(region)?)),
                    Some(("s", [child, q])) => settled.push((term_from(child, symbols)?, rat_from_atom(q)?)),
                    _ => return Err(e.error("expected (p <term> <opens>) or (s <term> <rat>)")),
                }
            }
            Ok(Term::new(open, settled))
        }
        Some(("generic", points)) => {
            let pts = points.iter().map(rat_from_atom).collect::<Result<Vec<_>>>()?;
            let grid = Grid::new(pts).map_err(|e| s.error(e.to_string()))?;
            Ok(generic(&grid))
        }
        _ => Err(s.error("expected a term: (hat ...), (term ...), (generic ...) or a defined name")),
    }
}

fn operand_from(s: &Sexp, symbols: &SymbolTable, bound: &[String]) -> Result<Operand> {
    if let Some(("var", rest)) = s.head() {
        let [name] = rest else {
            return Err(s.error("expected (var <name>)"));
        };
        let name = name.as_atom().ok_or_else(|| name.error("variable name must be a symbol"))?;
        if !bound.iter().any(|b| b == name) {
            let (line, col) = s.pos();
            return Err(Error::UnboundVariable { name: name.to_string(), line, col });
        }
        return Ok(Operand::Var(name.to_string()));
    }
    term_from(s, symbols).map(Operand::Param)
}

fn formula_from(s: &Sexp, symbols: &SymbolTable, bound: &mut Vec<String>) -> Result<Formula> {
    let (head, rest) = s.head().ok_or_else(|| s.error("expected a formula"))?;
    let binary = |bound: &mut Vec<String>, rest: &[Sexp]| -> Result<(Formula, Formula)> {
        match rest {
            [a, b] => Ok((formula_from(a, symbols, bound)?, formula_from(b, symbols, bound)?)),
            _ => Err(s.error(format!("`{head}` takes two formulas"))),
        }
    };
    match head {
        "eq" | "mem" => {
            let [a, b] = rest else {
                return Err(s.error(format!("`{head}` takes two operands")));
            };
            let a = operand_from(a, symbols, bound)?;
            let b = operand_from(b, symbols, bound)?;
            Ok(if head == "eq" { Formula::Eq(a, b) } else { Formula::Mem(a, b) })
        }
        "and" => binary(bound, rest).map(|(a, b)| Formula::and(a, b)),
        "or" => binary(bound, rest).map(|(a, b)| Formula::or(a, b)),
        "imp" => binary(bound, rest).map(|(a, b)| Formula::implies(a, b)),
        "iff" => binary(bound, rest).map(|(a, b)| Formula::iff(a, b)),
        "bot" if rest.is_empty() => Ok(Formula::Bot),
        "not" => match rest {
            [a] => Ok(Formula::not(formula_from(a, symbols, bound)?)),
            _ => Err(s.error("`not` takes one formula")),
        },
        "ex" | "all" => {
            let (var, body, range) = match rest {
                [v, body] => (v, body, None),
                [v, kw, t, body] if kw.as_atom() == Some("in") => (v, body, Some(t)),
                _ => return Err(s.error(format!("expected ({head} <var> <formula>) or ({head} <var> in <term> <formula>)"))),
            };
            let name = var.as_atom().ok_or_else(|| var.error("bound variable must be a symbol"))?.to_string();
            let range = range.map(|t| operand_from(t, symbols, bound)).transpose()?;
            bound.push(name.clone());
            let body = formula_from(body, symbols, bound);
            bound.pop();
            let body = body?;
            Ok(match (head, range) {
                ("ex", None) => Formula::exists(&name, body),
                ("all", None) => Formula::forall(&name, body),
                ("ex", Some(t)) => Formula::exists_in(&name, t, body),
                (_, Some(t)) => Formula::forall_in(&name, t, body),
                _ => unreachable!(),
            })
        }
        _ => Err(s.error(format!("unknown connective `{head}`"))),
    }
}

fn def_from(s: &Sexp, symbols: &mut SymbolTable) -> Result<bool> {
    match s.head() {
        Some(("def", [name, t])) => {
            let name = name.as_atom().ok_or_else(|| name.error("definition name must be a symbol"))?;
            let term = term_from(t, symbols)?;
            symbols.insert(name.to_string(), term);
            Ok(true)
        }
        Some(("def", _)) => Err(s.error("expected (def NAME <term>)")),
        _ => Ok(false),
    }
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    rat_from_atom(&read_one(text)?)
}

pub fn parse_endpoint(text: &str) -> Result<Endpoint> {
    endpoint_from(&read_one(text)?)
}

pub fn parse_opens(text: &str) -> Result<OpenSet> {
    opens_from(&read_one(text)?)
}

pub fn parse_term(text: &str, symbols: &SymbolTable) -> Result<Term> {
    term_from(&read_one(text)?, symbols)
}

/// Parses one formula. Every `(var x)` must be bound by an enclosing
/// quantifier; bare symbols are looked up in `symbols`.
pub fn parse_formula(text: &str, symbols: &SymbolTable) -> Result<Formula> {
    formula_from(&read_one(text)?, symbols, &mut Vec::new())
}

/// Parses a file of `(def NAME <term>)` forms. Later definitions may refer
/// to earlier ones.
pub fn parse_symbols(text: &str) -> Result<SymbolTable> {
    let mut symbols = SymbolTable::new();
    for s in read_all(text)? {
        if !def_from(&s, &mut symbols)? {
            return Err(s.error("expected (def NAME <term>)"));
        }
    }
    Ok(symbols)
}

/// Parses definitions followed by exactly one formula, extending `symbols`.
pub fn parse_formula_file(text: &str, symbols: &SymbolTable) -> Result<Formula> {
    let mut symbols = symbols.clone();
    let mut formula = None;
    for s in read_all(text)? {
        if def_from(&s, &mut symbols)? {
            continue;
        }
        if formula.is_some() {
            return Err(s.error("more than one formula in input"));
        }
        formula = Some(formula_from(&s, &symbols, &mut Vec::new())?);
    }
    formula.ok_or(Error::Syntax { line: 1, col: 1, msg: "no formula in input".into() })
}

/// Parses definitions followed by exactly one term.
pub fn parse_term_file(text: &str, symbols: &SymbolTable) -> Result<Term> {
    let mut symbols = symbols.clone();
    let mut term = None;
    for s in read_all(text)? {
        if def_from(&s, &mut symbols)? {
            continue;
        }
        if term.is_some() {
            return Err(s.error("more than one term in input"));
        }
        term = Some(term_from(&s, &symbols)?);
    }
    term.ok_or(Error::Syntax { line: 1, col: 1, msg: "no term in input".into() })
}

/// Parses a context file: any number of `(def ...)` forms and one
/// `(context (terms <term>...) (subbase <opens>...) (grid <rat>...))`.
/// The subbase is closed under pairwise intersection and gains ∅ and ℝ.
/// Missing sections default to no terms, the trivial subbase and grid `{0}`.
pub fn parse_context(text: &str) -> Result<(SymbolTable, Context)> {
    let mut symbols = SymbolTable::new();
    let mut ctx = None;
    for s in read_all(text)? {
        if def_from(&s, &mut symbols)? {
            continue;
        }
        let Some(("context", sections)) = s.head() else {
            return Err(s.error("expected (def ...) or (context ...)"));
        };
        if ctx.is_some() {
            return Err(s.error("duplicate (context ...)"));
        }
        let mut terms = Vec::new();
        let mut generators = Vec::new();
        let mut grid = vec![Rat::zero()];
        for sec in sections {
            match sec.head() {
                Some(("terms", ts)) => {
                    for t in ts {
                        terms.push(term_from(t, &symbols)?);
                    }
                }
                Some(("subbase", os)) => {
                    for o in os {
                        generators.push(opens_from(o)?);
                    }
                }
                Some(("grid", qs)) => {
                    grid = qs.iter().map(rat_from_atom).collect::<Result<_>>()?;
                }
                _ => return Err(sec.error("expected (terms ...), (subbase ...) or (grid ...)")),
            }
        }
        let grid = Grid::new(grid).map_err(|e| s.error(e.to_string()))?;
        ctx = Some(Context::with_generators(terms, generators, grid));
    }
    let ctx = ctx.unwrap_or_else(|| Context::with_terms(Vec::new()));
    Ok((symbols, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opens::{frac, int};
    use crate::terms::natural;

    #[test]
    fn parses_membership_of_hats() {
        let f = parse_formula("(mem (hat (set)) (hat (set (set))))", &SymbolTable::new()).unwrap();
        assert_eq!(f, Formula::mem(Term::empty(), natural(1)));
    }

    #[test]
    fn unbound_variable_is_rejected() {
        let err = parse_formula("(imp (bot) (eq (var x) (var x)))", &SymbolTable::new()).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable { ref name, line: 1, col: 16 } if name == "x"));
    }

    #[test]
    fn symbols_resolve_inside_quantifiers() {
        let symbols = parse_symbols("(def T1 (hat (set)))\n(def T2 (hat (set (set))))").unwrap();
        let f = parse_formula("(all x (imp (mem (var x) T1) (mem (var x) T2)))", &symbols).unwrap();
        let want = Formula::forall(
            "x",
            Formula::implies(
                Formula::mem(Operand::var("x"), Term::empty()),
                Formula::mem(Operand::var("x"), natural(1)),
            ),
        );
        assert_eq!(f, want);
        let err = parse_formula("(mem T3 T1)", &symbols).unwrap_err();
        assert!(matches!(err, Error::UnknownSymbol { .. }));
    }

    #[test]
    fn sugar_expands() {
        let s = SymbolTable::new();
        let f = parse_formula("(not (bot))", &s).unwrap();
        assert_eq!(f, Formula::implies(Formula::Bot, Formula::Bot));
        let f = parse_formula("(all x in (hat (set)) (bot))", &s).unwrap();
        assert_eq!(f, Formula::forall_in("x", Term::empty(), Formula::Bot));
    }

    #[test]
    fn opens_and_rats() {
        let o = parse_opens("(opens (iv -inf -1/2) (iv 0 +inf))").unwrap();
        assert_eq!(o.to_string(), "(opens (iv -inf -1/2) (iv 0 +inf))");
        assert!(parse_opens("(opens)").unwrap().is_empty());
        assert_eq!(parse_rat("6/4").unwrap(), frac(3, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn general_terms_and_generic() {
        let s = SymbolTable::new();
        let t = parse_term("(term (p (hat (set)) (opens (iv 0 1))) (s (hat (set)) 3))", &s).unwrap();
        assert_eq!(t.rank(), 1);
        assert_eq!(t.breakpoints(), &[int(0), int(1), int(3)]);
        let g = parse_term("(generic 0 1)", &s).unwrap();
        assert_eq!(g.open_entries().len(), 2);
        assert_eq!(parse_term(&g.to_string(), &s).unwrap(), g);
    }

    #[test]
    fn context_file() {
        let text = "(def A (hat (set)))\n(context (terms A (hat (set (set)))) (subbase (opens (iv 0 2)) (opens (iv 1 3))) (grid 0 1))";
        let (symbols, ctx) = parse_context(text).unwrap();
        assert!(symbols.contains_key("A"));
        assert_eq!(ctx.terms().len(), 2);
        assert_eq!(ctx.subbase().len(), 5);
        assert_eq!(ctx.grid().points(), &[int(0), int(1)]);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_formula("(and (bot)\n   (frob))", &SymbolTable::new()).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, col: 4, .. }));
    }
}

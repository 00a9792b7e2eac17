//! Karva-notation genomes.
//!
//! A gene is a fixed-length string of symbols split into a head (functions
//! and terminals) and a tail (terminals only). The tail length
//! `t = h * (a - 1) + 1` guarantees that breadth-first decoding always
//! closes, however the head is filled. Only the prefix needed to close the
//! tree (the expressed region) contributes to the model.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

/// Built-in primitive functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Add,
    Sub,
    Mul,
    Div,
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 10] = [
        Func::Add,
        Func::Sub,
        Func::Mul,
        Func::Div,
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sqrt,
    ];

    pub fn arity(self) -> usize {
        match self {
            Func::Add | Func::Sub | Func::Mul | Func::Div => 2,
            _ => 1,
        }
    }

    /// Parameter-file name, e.g. `Add`.
    pub fn name(self) -> &'static str {
        match self {
            Func::Add => "Add",
            Func::Sub => "Sub",
            Func::Mul => "Mul",
            Func::Div => "Div",
            Func::Exp => "Exp",
            Func::Ln => "Ln",
            Func::Sin => "Sin",
            Func::Cos => "Cos",
            Func::Tan => "Tan",
            Func::Sqrt => "Sqrt",
        }
    }

    /// Symbol used in Karva and infix printouts.
    pub fn symbol(self) -> &'static str {
        match self {
            Func::Add => "+",
            Func::Sub => "-",
            Func::Mul => "*",
            Func::Div => "/",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
        }
    }

    /// Looks a function up by name or printout symbol, ignoring case.
    pub fn from_name(s: &str) -> Option<Func> {
        let s = s.trim();
        Func::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s) || f.symbol().eq_ignore_ascii_case(s))
    }

    /// Raw IEEE evaluation. Domain errors surface as non-finite results,
    /// which callers treat as invalid.
    #[inline]
    pub fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            Func::Add => x + y,
            Func::Sub => x - y,
            Func::Mul => x * y,
            Func::Div => x / y,
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A function in a symbol set together with its sampling weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub func: Func,
    pub weight: u32,
}

impl FunctionSymbol {
    pub fn new(func: Func, weight: u32) -> Self {
        Self { func, weight }
    }

    pub fn name(&self) -> &'static str {
        self.func.name()
    }

    pub fn arity(&self) -> usize {
        self.func.arity()
    }

    pub fn symbol(&self) -> &'static str {
        self.func.symbol()
    }
}

/// Predefined function sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionSetId {
    /// `+ * - / exp sin cos tan sqrt`, all with weight 1 (test problems).
    ArithTrig,
    /// `+ * ln / exp`, all with weight 3 (dew point).
    ArithLog,
}

impl FunctionSetId {
    pub fn functions(self) -> Vec<FunctionSymbol> {
        use Func::*;
        match self {
            FunctionSetId::ArithTrig => [Add, Mul, Sub, Div, Exp, Sin, Cos, Tan, Sqrt]
                .into_iter()
                .map(|f| FunctionSymbol::new(f, 1))
                .collect(),
            FunctionSetId::ArithLog => [Add, Mul, Ln, Div, Exp]
                .into_iter()
                .map(|f| FunctionSymbol::new(f, 3))
                .collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionSetId::ArithTrig => "arith-trig",
            FunctionSetId::ArithLog => "arith-log",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.trim() {
            "arith-trig" => Some(FunctionSetId::ArithTrig),
            "arith-log" => Some(FunctionSetId::ArithLog),
            _ => None,
        }
    }
}

/// Functions, variables and constant slots available to genes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSet {
    functions: Vec<FunctionSymbol>,
    variables: Vec<String>,
    constant_slots: usize,
    constant_range: (f64, f64),
}

impl SymbolSet {
    pub fn new(
        functions: Vec<FunctionSymbol>,
        variables: Vec<String>,
        constant_slots: usize,
        constant_range: (f64, f64),
    ) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::config("the function set is empty"));
        }
        for (i, f) in functions.iter().enumerate() {
            if f.weight == 0 {
                return Err(Error::config(format!("function {} has weight 0", f.name())));
            }
            if functions[..i].iter().any(|g| g.func == f.func) {
                return Err(Error::config(format!("function {} listed twice", f.name())));
            }
        }
        if variables.is_empty() {
            return Err(Error::config("at least one variable is required"));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::config(format!("variable `{v}` listed twice")));
            }
        }
        if variables.len() > u16::MAX as usize || constant_slots > u8::MAX as usize {
            return Err(Error::config("too many terminals"));
        }
        let (lo, hi) = constant_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config(format!(
                "constant range [{lo}, {hi}] must have lower < upper"
            )));
        }
        Ok(Self {
            functions,
            variables,
            constant_slots,
            constant_range,
        })
    }

    pub fn functions(&self) -> &[FunctionSymbol] {
        &self.functions
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constant_slots(&self) -> usize {
        self.constant_slots
    }

    pub fn constant_range(&self) -> (f64, f64) {
        self.constant_range
    }

    pub fn max_arity(&self) -> usize {
        self.functions.iter().map(|f| f.arity()).max().unwrap_or(1)
    }

    pub fn contains(&self, func: Func) -> bool {
        self.functions.iter().any(|f| f.func == func)
    }
}

/// Lengths shared by every gene of a chromosome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneLayout {
    pub head_len: usize,
    pub max_arity: usize,
    pub tail_len: usize,
    pub dc_len: usize,
    pub rnc_enabled: bool,
}

impl GeneLayout {
    /// Symbol string length `h + t`; the Dc array is stored separately.
    pub fn gene_len(&self) -> usize {
        self.head_len + self.tail_len
    }
}

/// Computes the gene layout for a head length and symbol set.
pub fn layout_of(head_len: usize, symbols: &SymbolSet, rnc_enabled: bool) -> Result<GeneLayout> {
    if head_len == 0 {
        return Err(Error::config("gene head size must be at least 1"));
    }
    if symbols.functions().is_empty() {
        return Err(Error::config("the function set is empty"));
    }
    let max_arity = symbols.max_arity();
    let tail_len = head_len * (max_arity - 1) + 1;
    Ok(GeneLayout {
        head_len,
        max_arity,
        tail_len,
        dc_len: if rnc_enabled { tail_len } else { 0 },
        rnc_enabled,
    })
}

/// One position of a gene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Function(Func),
    /// Index into [`SymbolSet::variables`].
    Variable(u16),
    /// Constant terminal `Ck`, resolved against the gene's constant array.
    Constant(u8),
}

impl Symbol {
    pub fn arity(self) -> usize {
        match self {
            Symbol::Function(f) => f.arity(),
            _ => 0,
        }
    }

    pub fn is_function(self) -> bool {
        matches!(self, Symbol::Function(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gene {
    pub symbols: Vec<Symbol>,
    pub dc: Vec<u8>,
    pub constants: Vec<f64>,
}

impl Gene {
    /// Checks the head/tail/Dc invariants, returning a description of the
    /// first violation.
    pub fn check(&self, layout: &GeneLayout, symbols: &SymbolSet) -> Result<(), String> {
        if self.symbols.len() != layout.gene_len() {
            return Err(format!(
                "gene has {} symbols, layout needs {}",
                self.symbols.len(),
                layout.gene_len()
            ));
        }
        let slots = self.constants.len();
        for (i, s) in self.symbols.iter().enumerate() {
            match *s {
                Symbol::Function(f) => {
                    if i >= layout.head_len {
                        return Err(format!("function {f} in tail position {i}"));
                    }
                    if !symbols.contains(f) {
                        return Err(format!("function {f} not in the symbol set"));
                    }
                    if f.arity() > layout.max_arity {
                        return Err(format!("function {f} exceeds max arity"));
                    }
                }
                Symbol::Variable(v) => {
                    if v as usize >= symbols.variables().len() {
                        return Err(format!("variable index {v} out of range"));
                    }
                }
                Symbol::Constant(k) => {
                    if k as usize >= slots {
                        return Err(format!("constant C{k} without a slot"));
                    }
                }
            }
        }
        if self.dc.len() != layout.dc_len {
            return Err(format!(
                "Dc array has {} entries, layout needs {}",
                self.dc.len(),
                layout.dc_len
            ));
        }
        if let Some(&d) = self.dc.iter().find(|&&d| d as usize >= slots.max(1)) {
            return Err(format!("Dc entry {d} out of range"));
        }
        if self.constants.iter().any(|c| !c.is_finite()) {
            return Err("non-finite constant".to_string());
        }
        Ok(())
    }

    /// Number of symbols read by breadth-first decoding.
    pub fn expressed_len(&self) -> usize {
        let mut open = 1usize;
        let mut i = 0;
        while open > 0 {
            open = open - 1 + self.symbols[i].arity();
            i += 1;
        }
        i
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<Gene>,
    pub linking: Func,
}

impl Chromosome {
    pub fn new(genes: Vec<Gene>, linking: Func) -> Result<Self> {
        if genes.is_empty() {
            return Err(Error::config("a chromosome needs at least one gene"));
        }
        if linking.arity() != 2 {
            return Err(Error::config(format!(
                "linking function {} is not binary",
                linking.name()
            )));
        }
        Ok(Self { genes, linking })
    }

    pub fn check(&self, layout: &GeneLayout, symbols: &SymbolSet) -> Result<(), String> {
        if self.genes.is_empty() {
            return Err("chromosome without genes".to_string());
        }
        if self.linking.arity() != 2 {
            return Err("linking function must be binary".to_string());
        }
        for (i, g) in self.genes.iter().enumerate() {
            g.check(layout, symbols).map_err(|e| format!("gene {i}: {e}"))?;
        }
        Ok(())
    }

    /// Decodes every gene and joins the trees with the linking function,
    /// left-associatively.
    pub fn to_expr(&self, symbols: &SymbolSet) -> Expr {
        let mut trees = self.genes.iter().map(|g| decode(g, symbols));
        let first = trees.next().expect("chromosome has at least one gene");
        trees.fold(first, |acc, t| Expr::Func(self.linking, vec![acc, t]))
    }
}

/// Decoded expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Func(Func, Vec<Expr>),
    Var(String),
    Const(f64),
}

impl Expr {
    pub fn func(f: Func, args: Vec<Expr>) -> Self {
        debug_assert_eq!(f.arity(), args.len());
        Expr::Func(f, args)
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Expr::Func(_, args) => 1 + args.iter().map(Expr::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Func(_, args) => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    /// Distinct variable names in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a str>) {
            match e {
                Expr::Var(v) => {
                    if !out.contains(&v.as_str()) {
                        out.push(v);
                    }
                }
                Expr::Func(_, args) => args.iter().for_each(|a| walk(a, out)),
                Expr::Const(_) => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Fully parenthesized infix form.
    pub fn to_infix(&self) -> String {
        let mut s = String::new();
        self.write_infix(&mut s);
        s
    }

    fn write_infix(&self, out: &mut String) {
        match self {
            Expr::Var(v) => out.push_str(v),
            Expr::Const(c) => {
                let _ = write!(out, "{}", fmt_constant(*c));
            }
            Expr::Func(f, args) if args.len() == 2 => {
                out.push('(');
                args[0].write_infix(out);
                out.push_str(f.symbol());
                args[1].write_infix(out);
                out.push(')');
            }
            Expr::Func(f, args) => {
                out.push_str(f.symbol());
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    a.write_infix(out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_infix())
    }
}

/// Shortest round-trip representation with a trailing `.0` on integral
/// values, e.g. `7.0` or `-9.381786492548889`.
pub fn fmt_constant(c: f64) -> String {
    format!("{c:?}")
}

/// Breadth-first (Karva) decoding of a gene.
///
/// Symbols are read left to right; each function takes the next `arity`
/// unread symbols as its children, in queue order, until no argument slot
/// is open.
pub fn decode(gene: &Gene, symbols: &SymbolSet) -> Expr {
    let len = gene.expressed_len();
    let expressed = &gene.symbols[..len];

    // first child position of every expressed node, in level order
    let mut first_child = Vec::with_capacity(len);
    let mut next = 1;
    for s in expressed {
        first_child.push(next);
        next += s.arity();
    }

    fn build(k: usize, expressed: &[Symbol], first_child: &[usize], gene: &Gene, symbols: &SymbolSet) -> Expr {
        match expressed[k] {
            Symbol::Function(f) => Expr::Func(
                f,
                (0..f.arity())
                    .map(|c| build(first_child[k] + c, expressed, first_child, gene, symbols))
                    .collect(),
            ),
            Symbol::Variable(v) => Expr::Var(symbols.variables()[v as usize].clone()),
            Symbol::Constant(c) => Expr::Const(gene.constants[c as usize]),
        }
    }

    build(0, expressed, &first_child, gene, symbols)
}

/// Expressed node count of a gene, without building the tree.
pub fn gene_size(gene: &Gene) -> usize {
    gene.expressed_len()
}

/// Model size: expressed nodes summed over genes, not counting the `n - 1`
/// linking nodes.
pub fn chromosome_size(chrom: &Chromosome) -> usize {
    chrom.genes.iter().map(gene_size).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    /// Per-gene dot-separated symbol strings with constant listings.
    Karva,
    /// Fully parenthesized infix, genes joined by the linking symbol.
    Infix,
}

pub fn render(chrom: &Chromosome, symbols: &SymbolSet, style: RenderStyle) -> String {
    match style {
        RenderStyle::Karva => {
            let mut out = String::new();
            for (i, gene) in chrom.genes.iter().enumerate() {
                let _ = writeln!(out, "Gene {i}");
                let _ = writeln!(out, "{}", karva_symbols(gene, symbols));
                for (k, c) in gene.constants.iter().enumerate() {
                    let _ = writeln!(out, "C{k}: {}", fmt_constant(*c));
                }
            }
            out
        }
        RenderStyle::Infix => chrom
            .genes
            .iter()
            .map(|g| format!("({})", decode(g, symbols).to_infix()))
            .collect::<Vec<_>>()
            .join(chrom.linking.symbol()),
    }
}

/// One-line Karva form: genes separated by ` | `, each followed by its
/// constants in brackets.
pub fn render_karva_compact(chrom: &Chromosome, symbols: &SymbolSet) -> String {
    chrom
        .genes
        .iter()
        .map(|g| {
            let consts = g
                .constants
                .iter()
                .enumerate()
                .map(|(k, c)| format!("C{k}={}", fmt_constant(*c)))
                .collect::<Vec<_>>()
                .join(";");
            if consts.is_empty() {
                karva_symbols(g, symbols)
            } else {
                format!("{}[{consts}]", karva_symbols(g, symbols))
            }
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Dot-separated symbol string of a whole gene (expressed or not).
pub fn karva_symbols(gene: &Gene, symbols: &SymbolSet) -> String {
    gene.symbols
        .iter()
        .map(|s| match *s {
            Symbol::Function(f) => f.symbol().to_string(),
            Symbol::Variable(v) => symbols.variables()[v as usize].clone(),
            Symbol::Constant(k) => format!("C{k}"),
        })
        .collect::<Vec<_>>()
        .join(".")
}

/// Parses a dot-separated Karva symbol string. Terminals named `Ck` resolve
/// to constant slots; other names must be variables of the symbol set.
pub fn parse_karva(text: &str, symbols: &SymbolSet) -> Result<Vec<Symbol>> {
    text.trim()
        .split('.')
        .enumerate()
        .map(|(i, tok)| {
            let tok = tok.trim();
            if let Some(pos) = symbols.variables().iter().position(|v| v == tok) {
                return Ok(Symbol::Variable(pos as u16));
            }
            if let Some(k) = tok.strip_prefix('C').and_then(|k| k.parse::<u8>().ok()) {
                return Ok(Symbol::Constant(k));
            }
            Func::from_name(tok).map(Symbol::Function).ok_or_else(|| Error::Parse {
                position: i,
                message: format!("unknown Karva symbol `{tok}`"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arith(vars: &[&str]) -> SymbolSet {
        SymbolSet::new(
            FunctionSetId::ArithTrig.functions(),
            vars.iter().map(|s| s.to_string()).collect(),
            2,
            (-10.0, 10.0),
        )
        .unwrap()
    }

    fn dew_symbols() -> SymbolSet {
        SymbolSet::new(
            FunctionSetId::ArithLog.functions(),
            vec!["d0".into(), "d1".into()],
            2,
            (-10.0, 10.0),
        )
        .unwrap()
    }

    fn gene(text: &str, symbols: &SymbolSet, constants: &[f64]) -> Gene {
        Gene {
            symbols: parse_karva(text, symbols).unwrap(),
            dc: Vec::new(),
            constants: constants.to_vec(),
        }
    }

    #[test]
    fn layout_examples() {
        let s = arith(&["a"]);
        let l = layout_of(8, &s, true).unwrap();
        assert_eq!((l.tail_len, l.gene_len(), l.dc_len), (9, 17, 9));
        let l = layout_of(4, &s, true).unwrap();
        assert_eq!((l.tail_len, l.gene_len()), (5, 9));
        let l = layout_of(1, &s, false).unwrap();
        assert_eq!((l.tail_len, l.gene_len(), l.dc_len), (2, 3, 0));
        assert!(layout_of(0, &s, true).is_err());
    }

    #[test]
    fn unary_only_set_has_tail_of_one() {
        let s = SymbolSet::new(vec![FunctionSymbol::new(Func::Sin, 1)], vec!["x".into()], 0, (0.0, 1.0)).unwrap();
        let l = layout_of(5, &s, false).unwrap();
        assert_eq!(l.tail_len, 1);
    }

    #[test]
    fn empty_function_set_rejected() {
        assert!(SymbolSet::new(vec![], vec!["a".into()], 2, (-1.0, 1.0)).is_err());
        assert!(SymbolSet::new(FunctionSetId::ArithLog.functions(), vec![], 2, (-1.0, 1.0)).is_err());
        assert!(SymbolSet::new(FunctionSetId::ArithLog.functions(), vec!["a".into()], 2, (1.0, 1.0)).is_err());
    }

    #[test]
    fn decode_simple_add() {
        let s = arith(&["a", "b"]);
        let g = gene("+.a.b", &s, &[]);
        let t = decode(&g, &s);
        assert_eq!(t, Expr::func(Func::Add, vec![Expr::var("a"), Expr::var("b")]));
        assert_eq!(t.size(), 3);
    }

    #[test]
    fn decode_root_terminal() {
        let s = arith(&["a", "b"]);
        let g = gene("a.+.b.a.b", &s, &[]);
        assert_eq!(decode(&g, &s), Expr::var("a"));
        assert_eq!(g.expressed_len(), 1);
    }

    #[test]
    fn decode_printed_dew_gene() {
        let s = dew_symbols();
        let g = gene(
            "*.ln.C1.d0.C0.C1.d1.d1.C1",
            &s,
            &[-1.0538681881248397, -9.381786492548889],
        );
        let l = layout_of(4, &s, false).unwrap();
        assert_eq!(g.symbols.len(), l.gene_len());
        let t = decode(&g, &s);
        assert_eq!(
            t,
            Expr::func(
                Func::Mul,
                vec![
                    Expr::func(Func::Ln, vec![Expr::var("d0")]),
                    Expr::Const(-9.381786492548889)
                ]
            )
        );
        assert_eq!(g.expressed_len(), 4);
        assert_eq!(t.size(), 4);
    }

    #[test]
    fn decode_is_breadth_first() {
        // *(+(a, b), -(c, a)) in level order: * + - a b c a
        let s = arith(&["a", "b", "c"]);
        let g = gene("*.+.-.a.b.c.a.a.a", &s, &[]);
        assert_eq!(decode(&g, &s).to_infix(), "((a+b)*(c-a))");
    }

    #[test]
    fn size_excludes_linking_nodes() {
        // cos(sin(A)) ; E*(B/7.0) ; sin(0.0*A)
        let s = arith(&["A", "B", "E"]);
        let g1 = gene("cos.sin.A.A.A", &s, &[]);
        let g2 = gene("*.E./.B.C0", &s, &[7.0]);
        let g3 = gene("sin.*.C0.A.A", &s, &[0.0]);
        let c = Chromosome::new(vec![g1, g2, g3], Func::Add).unwrap();
        assert_eq!(chromosome_size(&c), 12);
        assert_eq!(c.to_expr(&s).size(), 14);
        assert_eq!(
            render(&c, &s, RenderStyle::Infix),
            "(cos(sin(A)))+((E*(B/7.0)))+(sin((0.0*A)))"
        );
    }

    #[test]
    fn single_terminal_size_one() {
        let s = arith(&["a"]);
        let c = Chromosome::new(vec![gene("a.a.a", &s, &[])], Func::Add).unwrap();
        assert_eq!(chromosome_size(&c), 1);
    }

    #[test]
    fn karva_render_matches_printout() {
        let s = dew_symbols();
        let g = gene(
            "*.ln.C1.d0.C0.C1.d1.d1.C1",
            &s,
            &[-1.0538681881248397, -9.381786492548889],
        );
        let c = Chromosome::new(vec![g], Func::Add).unwrap();
        assert_eq!(
            render(&c, &s, RenderStyle::Karva),
            "Gene 0\n*.ln.C1.d0.C0.C1.d1.d1.C1\nC0: -1.0538681881248397\nC1: -9.381786492548889\n"
        );
        assert_eq!(
            render_karva_compact(&c, &s),
            "*.ln.C1.d0.C0.C1.d1.d1.C1[C0=-1.0538681881248397;C1=-9.381786492548889]"
        );
    }

    #[test]
    fn infix_joins_genes_with_linking_symbol() {
        let s = arith(&["a", "b"]);
        let c = Chromosome::new(vec![gene("a.a.a", &s, &[]), gene("b.a.a", &s, &[])], Func::Add).unwrap();
        assert_eq!(render(&c, &s, RenderStyle::Infix), "(a)+(b)");
    }

    #[test]
    fn check_rejects_function_in_tail() {
        let s = arith(&["a"]);
        let l = layout_of(1, &s, false).unwrap();
        let mut g = gene("+.a.a", &s, &[]);
        assert!(g.check(&l, &s).is_ok());
        g.symbols[2] = Symbol::Function(Func::Sin);
        assert!(g.check(&l, &s).unwrap_err().contains("tail"));
    }

    #[test]
    fn check_rejects_bad_dc() {
        let s = arith(&["a"]);
        let l = layout_of(1, &s, true).unwrap();
        let mut g = Gene {
            symbols: parse_karva("+.a.C1", &s).unwrap(),
            dc: vec![0, 1],
            constants: vec![1.0, 2.0],
        };
        assert!(g.check(&l, &s).is_ok());
        g.dc[1] = 2;
        assert!(g.check(&l, &s).is_err());
    }
}

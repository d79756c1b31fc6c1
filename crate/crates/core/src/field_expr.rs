//! Scalar-field expressions: parsing, evaluation and symbolic differentiation.
//!
//! Expressions are infix over declared variables with the functions `sin`,
//! `cos`, `exp`, `ln` and `sqrt`. Precedence, tightest first: `^`
//! (right-associative), unary minus, `*` `/`, `+` `-`.
//!
//! ```
//! use walker_core::field_expr::ExprAst;
//!
//! let f = ExprAst::parse("y*y + sin(z)", &["y", "z"]).unwrap();
//! let df = f.differentiate("y").unwrap();
//! assert_eq!(df.eval(&[3.0, 0.0]).unwrap(), 6.0);
//! ```
//!
//! Trees are normalized on construction: constant subtrees are folded and the
//! identities `x+0`, `x*1`, `x*0`, `x^1`, `x^0` are applied. Nothing else is
//! simplified.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("unknown function `{name}` at position {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("variable `{0}` is not declared")]
    UnknownVariable(String),
    #[error("expected {expected} variable values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
        }
    }
}

/// A node of the expression tree. Variables are indices into the declared
/// variable list of the owning [`ExprAst`].
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Node>),
    Binary(BinaryOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_const(&self, value: f64) -> bool {
        self.as_const() == Some(value)
    }

    pub fn neg(a: Node) -> Node {
        match a {
            Node::Const(c) => Node::Const(-c),
            Node::Unary(UnaryOp::Neg, inner) => *inner,
            a => Node::Unary(UnaryOp::Neg, Box::new(a)),
        }
    }

    /// Builds a binary node, folding constants and applying the 0/1
    /// identities. A constant pair whose result is not finite (`1/0`) is left
    /// unfolded so that evaluation reports it.
    pub fn binary(op: BinaryOp, a: Node, b: Node) -> Node {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            let folded = apply_binary(op, x, y);
            if folded.is_finite() {
                return Node::Const(folded);
            }
            return Node::Binary(op, Box::new(a), Box::new(b));
        }
        match op {
            BinaryOp::Add if a.is_const(0.0) => b,
            BinaryOp::Add if b.is_const(0.0) => a,
            BinaryOp::Sub if b.is_const(0.0) => a,
            BinaryOp::Sub if a.is_const(0.0) => Node::neg(b),
            BinaryOp::Mul if a.is_const(0.0) || b.is_const(0.0) => Node::Const(0.0),
            BinaryOp::Mul if a.is_const(1.0) => b,
            BinaryOp::Mul if b.is_const(1.0) => a,
            BinaryOp::Div if a.is_const(0.0) => Node::Const(0.0),
            BinaryOp::Div if b.is_const(1.0) => a,
            BinaryOp::Pow if b.is_const(0.0) => Node::Const(1.0),
            BinaryOp::Pow if b.is_const(1.0) => a,
            _ => Node::Binary(op, Box::new(a), Box::new(b)),
        }
    }

    pub fn call(func: Func, a: Node) -> Node {
        if let Some(x) = a.as_const() {
            let folded = func.apply(x);
            if folded.is_finite() {
                return Node::Const(folded);
            }
        }
        Node::Call(func, Box::new(a))
    }

    fn add(a: Node, b: Node) -> Node {
        Node::binary(BinaryOp::Add, a, b)
    }
    fn sub(a: Node, b: Node) -> Node {
        Node::binary(BinaryOp::Sub, a, b)
    }
    fn mul(a: Node, b: Node) -> Node {
        Node::binary(BinaryOp::Mul, a, b)
    }
    fn div(a: Node, b: Node) -> Node {
        Node::binary(BinaryOp::Div, a, b)
    }
    fn pow(a: Node, b: Node) -> Node {
        Node::binary(BinaryOp::Pow, a, b)
    }

    fn depends_on(&self, var: usize) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Var(i) => *i == var,
            Node::Unary(_, a) | Node::Call(_, a) => a.depends_on(var),
            Node::Binary(_, a, b) => a.depends_on(var) || b.depends_on(var),
        }
    }

    fn derivative(&self, var: usize) -> Node {
        match self {
            Node::Const(_) => Node::Const(0.0),
            Node::Var(i) => Node::Const(if *i == var { 1.0 } else { 0.0 }),
            Node::Unary(UnaryOp::Neg, a) => Node::neg(a.derivative(var)),
            Node::Binary(op, a, b) => {
                let (a, b) = (a.as_ref(), b.as_ref());
                match op {
                    BinaryOp::Add => Node::add(a.derivative(var), b.derivative(var)),
                    BinaryOp::Sub => Node::sub(a.derivative(var), b.derivative(var)),
                    BinaryOp::Mul => Node::add(
                        Node::mul(a.derivative(var), b.clone()),
                        Node::mul(a.clone(), b.derivative(var)),
                    ),
                    BinaryOp::Div => Node::div(
                        Node::sub(
                            Node::mul(a.derivative(var), b.clone()),
                            Node::mul(a.clone(), b.derivative(var)),
                        ),
                        Node::pow(b.clone(), Node::Const(2.0)),
                    ),
                    BinaryOp::Pow if !b.depends_on(var) => {
                        // b * a^(b-1) * a'
                        let reduced = Node::sub(b.clone(), Node::Const(1.0));
                        Node::mul(
                            Node::mul(b.clone(), Node::pow(a.clone(), reduced)),
                            a.derivative(var),
                        )
                    }
                    BinaryOp::Pow => {
                        // a^b * (b' ln a + b a'/a)
                        let log_term = Node::mul(b.derivative(var), Node::call(Func::Ln, a.clone()));
                        let base_term = Node::div(Node::mul(b.clone(), a.derivative(var)), a.clone());
                        Node::mul(self.clone(), Node::add(log_term, base_term))
                    }
                }
            }
            Node::Call(func, a) => {
                let inner = a.derivative(var);
                let outer = match func {
                    Func::Sin => Node::call(Func::Cos, (**a).clone()),
                    Func::Cos => Node::neg(Node::call(Func::Sin, (**a).clone())),
                    Func::Exp => self.clone(),
                    Func::Ln => Node::div(Node::Const(1.0), (**a).clone()),
                    Func::Sqrt => Node::div(Node::Const(0.5), self.clone()),
                };
                Node::mul(outer, inner)
            }
        }
    }

    fn eval(&self, vars: &[String], values: &[f64]) -> Result<f64, ExprError> {
        let domain = |reason: &str| ExprError::Domain {
            expr: Printer { node: self, vars }.to_string(),
            reason: reason.to_string(),
        };
        let out = match self {
            Node::Const(c) => *c,
            Node::Var(i) => values[*i],
            Node::Unary(UnaryOp::Neg, a) => -a.eval(vars, values)?,
            Node::Binary(op, a, b) => {
                let x = a.eval(vars, values)?;
                let y = b.eval(vars, values)?;
                if *op == BinaryOp::Div && y == 0.0 {
                    return Err(domain("division by zero"));
                }
                apply_binary(*op, x, y)
            }
            Node::Call(func, a) => {
                let x = a.eval(vars, values)?;
                match func {
                    Func::Ln if x <= 0.0 => return Err(domain("logarithm of a non-positive value")),
                    Func::Sqrt if x < 0.0 => return Err(domain("square root of a negative value")),
                    _ => func.apply(x),
                }
            }
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(domain("non-finite result"))
        }
    }
}

fn apply_binary(op: BinaryOp, x: f64, y: f64) -> f64 {
    match op {
        BinaryOp::Add => x + y,
        BinaryOp::Sub => x - y,
        BinaryOp::Mul => x * y,
        BinaryOp::Div => x / y,
        BinaryOp::Pow => x.powf(y),
    }
}

/// A parsed expression together with its ordered variable declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    root: Node,
    vars: Arc<[String]>,
}

impl ExprAst {
    pub fn parse(text: &str, variables: &[&str]) -> Result<ExprAst, ExprError> {
        let vars: Arc<[String]> = variables.iter().map(|v| v.to_string()).collect();
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens: &tokens, pos: 0, vars: &vars, len: text.len() };
        let root = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(ExprError::Syntax { pos: tok.pos, msg: format!("unexpected {}", tok.kind) });
        }
        Ok(ExprAst { root, vars })
    }

    pub fn constant(value: f64, variables: &[&str]) -> ExprAst {
        ExprAst { root: Node::Const(value), vars: variables.iter().map(|v| v.to_string()).collect() }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn as_const(&self) -> Option<f64> {
        self.root.as_const()
    }

    pub fn differentiate(&self, var: &str) -> Result<ExprAst, ExprError> {
        let index = self.var_index(var).ok_or_else(|| ExprError::UnknownVariable(var.to_string()))?;
        Ok(self.differentiate_index(index))
    }

    pub fn differentiate_index(&self, index: usize) -> ExprAst {
        ExprAst { root: self.root.derivative(index), vars: self.vars.clone() }
    }

    /// Evaluates with `values` bound to the declared variables in order.
    pub fn eval(&self, values: &[f64]) -> Result<f64, ExprError> {
        if values.len() != self.vars.len() {
            return Err(ExprError::Arity { expected: self.vars.len(), got: values.len() });
        }
        self.root.eval(&self.vars, values)
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { node: &self.root, vars: &self.vars }.fmt(f)
    }
}

struct Printer<'a> {
    node: &'a Node,
    vars: &'a [String],
}

impl Printer<'_> {
    fn child<'b>(&'b self, node: &'b Node) -> Printer<'b> {
        Printer { node, vars: self.vars }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, node: &Node) -> fmt::Result {
        match node {
            Node::Var(_) | Node::Call(..) => fmt::Display::fmt(&self.child(node), f),
            Node::Const(c) if *c >= 0.0 => fmt::Display::fmt(&self.child(node), f),
            _ => write!(f, "({})", self.child(node)),
        }
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Const(c) if *c < 0.0 => write!(f, "-{}", -c),
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => f.write_str(&self.vars[*i]),
            Node::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                self.write_operand(f, a)
            }
            Node::Binary(op, a, b) => {
                let sym = match op {
                    BinaryOp::Add => " + ",
                    BinaryOp::Sub => " - ",
                    BinaryOp::Mul => "*",
                    BinaryOp::Div => "/",
                    BinaryOp::Pow => "^",
                };
                self.write_operand(f, a)?;
                f.write_str(sym)?;
                self.write_operand(f, b)
            }
            Node::Call(func, a) => write!(f, "{}({})", func.name(), self.child(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Op(char),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Number(n) => write!(f, "number {n}"),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Op(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // optional exponent, only when followed by digits
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal = &text[start..i];
            let value: f64 = literal.parse().map_err(|_| ExprError::Syntax {
                pos: start,
                msg: format!("malformed number `{literal}`"),
            })?;
            tokens.push(Token { kind: TokenKind::Number(value), pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push(Token { kind: TokenKind::Ident(text[start..i].to_string()), pos: start });
        } else if "+-*/^()".contains(c) {
            tokens.push(Token { kind: TokenKind::Op(c), pos: i });
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap_or(c);
            return Err(ExprError::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    vars: &'a [String],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token { kind: TokenKind::Op(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.len, |t| t.pos)
    }

    fn expect_op(&mut self, op: char) -> Result<(), ExprError> {
        if self.peek_op() == Some(op) {
            self.pos += 1;
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |t| t.kind.to_string());
            Err(ExprError::Syntax { pos: self.here(), msg: format!("expected `{op}`, found {found}") })
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if op == '+' { BinaryOp::Add } else { BinaryOp::Sub };
            lhs = Node::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.factor()?;
            let op = if op == '*' { BinaryOp::Mul } else { BinaryOp::Div };
            lhs = Node::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Node, ExprError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Node::neg(self.power()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(Node::pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(ExprError::Syntax { pos: self.len, msg: "unexpected end of input".into() });
        };
        self.pos += 1;
        match tok.kind {
            TokenKind::Number(n) => Ok(Node::Const(n)),
            TokenKind::Op('(') => {
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                if self.peek_op() == Some('(') {
                    let func = Func::from_name(&name)
                        .ok_or(ExprError::UnknownFunction { name, pos: tok.pos })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_op(')')?;
                    Ok(Node::call(func, arg))
                } else if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    Ok(Node::Var(i))
                } else if Func::from_name(&name).is_some() {
                    Err(ExprError::Syntax {
                        pos: self.here(),
                        msg: format!("function `{name}` needs a parenthesized argument"),
                    })
                } else {
                    Err(ExprError::UnknownIdentifier { name, pos: tok.pos })
                }
            }
            kind => Err(ExprError::Syntax { pos: tok.pos, msg: format!("unexpected {kind}") }),
        }
    }
}

/// Value and partial derivatives of a field of (y, z) at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldJet2 {
    pub value: f64,
    pub d_y: f64,
    pub d_z: f64,
    pub d_yy: f64,
    pub d_yz: f64,
    pub d_zz: f64,
}

type Field2Fn = dyn Fn(f64, f64) -> FieldJet2 + Send + Sync;

#[derive(Clone)]
enum Field2Source {
    Expr { value: ExprAst, d_y: ExprAst, d_z: ExprAst, d_yy: ExprAst, d_yz: ExprAst, d_zz: ExprAst },
    Closure(Arc<Field2Fn>),
}

/// A twice-differentiable field f(y, z). Parsed fields carry symbolic
/// partials; closure fields supply their own.
#[derive(Clone)]
pub struct ScalarField2 {
    source: Field2Source,
}

impl fmt::Debug for ScalarField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Field2Source::Expr { value, .. } => write!(f, "ScalarField2({value})"),
            Field2Source::Closure(_) => f.write_str("ScalarField2(<closure>)"),
        }
    }
}

impl ScalarField2 {
    pub const VARIABLES: [&'static str; 2] = ["y", "z"];

    pub fn parse(text: &str) -> Result<ScalarField2, ExprError> {
        Ok(Self::from_ast(ExprAst::parse(text, &Self::VARIABLES)?))
    }

    /// Builds the field from an AST declared over exactly `[y, z]`.
    ///
    /// # Panics
    /// If the AST was declared over other variables.
    pub fn from_ast(value: ExprAst) -> ScalarField2 {
        assert_eq!(value.variables(), Self::VARIABLES, "field must be declared over [y, z]");
        let d_y = value.differentiate_index(0);
        let d_z = value.differentiate_index(1);
        let d_yy = d_y.differentiate_index(0);
        let d_yz = d_y.differentiate_index(1);
        let d_zz = d_z.differentiate_index(1);
        ScalarField2 { source: Field2Source::Expr { value, d_y, d_z, d_yy, d_yz, d_zz } }
    }

    pub fn constant(c: f64) -> ScalarField2 {
        Self::from_ast(ExprAst::constant(c, &Self::VARIABLES))
    }

    pub fn from_fn(f: impl Fn(f64, f64) -> FieldJet2 + Send + Sync + 'static) -> ScalarField2 {
        ScalarField2 { source: Field2Source::Closure(Arc::new(f)) }
    }

    pub fn expr(&self) -> Option<&ExprAst> {
        match &self.source {
            Field2Source::Expr { value, .. } => Some(value),
            Field2Source::Closure(_) => None,
        }
    }

    /// True when the field is the constant zero by construction.
    pub fn is_identically_zero(&self) -> bool {
        self.expr().and_then(ExprAst::as_const) == Some(0.0)
    }

    pub fn value(&self, y: f64, z: f64) -> Result<f64, ExprError> {
        match &self.source {
            Field2Source::Expr { value, .. } => value.eval(&[y, z]),
            Field2Source::Closure(f) => Ok(f(y, z).value),
        }
    }

    pub fn jet(&self, y: f64, z: f64) -> Result<FieldJet2, ExprError> {
        match &self.source {
            Field2Source::Expr { value, d_y, d_z, d_yy, d_yz, d_zz } => {
                let p = [y, z];
                Ok(FieldJet2 {
                    value: value.eval(&p)?,
                    d_y: d_y.eval(&p)?,
                    d_z: d_z.eval(&p)?,
                    d_yy: d_yy.eval(&p)?,
                    d_yz: d_yz.eval(&p)?,
                    d_zz: d_zz.eval(&p)?,
                })
            }
            Field2Source::Closure(f) => Ok(f(y, z)),
        }
    }

    pub fn partials(&self) -> Option<[&ExprAst; 5]> {
        match &self.source {
            Field2Source::Expr { d_y, d_z, d_yy, d_yz, d_zz, .. } => Some([d_y, d_z, d_yy, d_yz, d_zz]),
            Field2Source::Closure(_) => None,
        }
    }
}

/// Value, first and second derivative of a one-variable function.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldJet1 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// A parsed function of one variable with symbolic first and second
/// derivatives. Used for cylinder profiles φ and curve components.
#[derive(Debug, Clone)]
pub struct ScalarField1 {
    value: ExprAst,
    d1: ExprAst,
    d2: ExprAst,
}

impl ScalarField1 {
    pub fn parse(text: &str, variable: &str) -> Result<ScalarField1, ExprError> {
        Ok(Self::from_ast(ExprAst::parse(text, &[variable])?))
    }

    /// # Panics
    /// If the AST is not declared over exactly one variable.
    pub fn from_ast(value: ExprAst) -> ScalarField1 {
        assert_eq!(value.variables().len(), 1, "expected a one-variable expression");
        let d1 = value.differentiate_index(0);
        let d2 = d1.differentiate_index(0);
        ScalarField1 { value, d1, d2 }
    }

    pub fn expr(&self) -> &ExprAst {
        &self.value
    }

    pub fn variable(&self) -> &str {
        &self.value.variables()[0]
    }

    pub fn value(&self, t: f64) -> Result<f64, ExprError> {
        self.value.eval(&[t])
    }

    pub fn jet(&self, t: f64) -> Result<FieldJet1, ExprError> {
        Ok(FieldJet1 { value: self.value.eval(&[t])?, d1: self.d1.eval(&[t])?, d2: self.d2.eval(&[t])? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yz(text: &str) -> ExprAst {
        ExprAst::parse(text, &["y", "z"]).unwrap()
    }

    #[test]
    fn evaluates_basic_examples() {
        assert_eq!(yz("y*y").eval(&[3.0, 7.0]).unwrap(), 9.0);
        let two = ExprAst::parse("2", &["y"]).unwrap();
        assert_eq!(two.as_const(), Some(2.0));
        assert_eq!(two.eval(&[123.0]).unwrap(), 2.0);
        assert_eq!(yz("sin(y)+exp(z)").eval(&[0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(ExprAst::parse("y^3", &["y"]).unwrap().eval(&[-2.0]).unwrap(), -8.0);
    }

    #[test]
    fn precedence_and_associativity() {
        let e = |s: &str| ExprAst::parse(s, &["y"]).unwrap().eval(&[2.0]).unwrap();
        assert_eq!(e("-2^2"), -4.0);
        assert_eq!(e("2^3^2"), 512.0);
        assert_eq!(e("2^-1"), 0.5);
        assert_eq!(e("1 - 2 - 3"), -4.0);
        assert_eq!(e("12 / 3 / 2"), 2.0);
        assert_eq!(e("y * -y"), -4.0);
        assert_eq!(e("-y^2 + 3*y"), 2.0);
        assert_eq!(e(" ( y + 1 ) * ( y - 1 ) "), 3.0);
        assert_eq!(e("1.5e1 + .5"), 15.5);
    }

    #[test]
    fn derivative_examples() {
        let sq = yz("y*y");
        assert_eq!(sq.differentiate("y").unwrap().eval(&[3.0, 0.0]).unwrap(), 6.0);
        assert_eq!(sq.differentiate("z").unwrap().as_const(), Some(0.0));
        let d = ExprAst::parse("sin(y)", &["y"]).unwrap().differentiate("y").unwrap();
        assert_eq!(d.eval(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn constant_derivative_is_zero_ast() {
        let d = yz("3.5").differentiate("y").unwrap();
        assert_eq!(d.root(), &Node::Const(0.0));
        assert!(matches!(yz("y").differentiate("x"), Err(ExprError::UnknownVariable(v)) if v == "x"));
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let err = ExprAst::parse("1 + ln(y)", &["y"]).unwrap().eval(&[0.0]).unwrap_err();
        match err {
            ExprError::Domain { expr, .. } => assert_eq!(expr, "ln(y)"),
            other => panic!("unexpected {other:?}"),
        }
        let err = ExprAst::parse("1/(y-1)", &["y"]).unwrap().eval(&[1.0]).unwrap_err();
        assert!(matches!(err, ExprError::Domain { ref reason, .. } if reason.contains("division")));
        assert!(ExprAst::parse("sqrt(y)", &["y"]).unwrap().eval(&[-1.0]).is_err());
        assert!(ExprAst::parse("y^0.5", &["y"]).unwrap().eval(&[-1.0]).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(ExprAst::parse("y +", &["y", "z"]), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(ExprAst::parse("x + y", &["y", "z"]), Err(ExprError::UnknownIdentifier { ref name, pos: 0 }) if name == "x"));
        assert!(matches!(ExprAst::parse("tan(y)", &["y", "z"]), Err(ExprError::UnknownFunction { ref name, .. }) if name == "tan"));
        assert!(matches!(ExprAst::parse("(y", &["y", "z"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(ExprAst::parse("y)", &["y", "z"]), Err(ExprError::Syntax { pos: 1, .. })));
        assert!(matches!(ExprAst::parse("", &["y", "z"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(ExprAst::parse("sin", &["y", "z"]), Err(ExprError::Syntax { .. })));
        assert!(matches!(ExprAst::parse("y # 2", &["y", "z"]), Err(ExprError::Syntax { pos: 2, .. })));
        assert!(matches!(ExprAst::parse("--y", &["y", "z"]), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn folding_leaves_no_constant_pairs() {
        fn check(node: &Node) {
            match node {
                Node::Binary(op, a, b) => {
                    if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
                        // only unfoldable pairs survive
                        assert!(!apply_binary(*op, x, y).is_finite(), "{x} {y}");
                    }
                    check(a);
                    check(b);
                }
                Node::Unary(_, a) | Node::Call(_, a) => check(a),
                _ => {}
            }
        }
        for text in ["2*3 + y", "y*(1+1) - 4/2", "sin(0)*y + cos(0)", "y^(1*1) + 0*z", "(2+3)^2*z/1"] {
            let ast = yz(text);
            check(ast.root());
            check(ast.differentiate("y").unwrap().root());
        }
        assert_eq!(yz("2*3 + 0*y").as_const(), Some(6.0));
        assert_eq!(yz("y^1").root(), &Node::Var(0));
    }

    #[test]
    fn printing_round_trips_simple_cases() {
        for text in ["y*y", "-y^2", "2^-y", "sin(y)/(1 + z)", "(y - z) - (y - z)", "-(-2)*y"] {
            let ast = yz(text);
            let again = yz(&ast.to_string());
            for p in [[0.3, -1.2], [2.0, 0.5]] {
                assert_eq!(ast.eval(&p).unwrap(), again.eval(&p).unwrap(), "{text} -> {ast}");
            }
        }
    }

    #[test]
    fn field2_partials() {
        let f = ScalarField2::parse("y^3 + y*z^2").unwrap();
        let j = f.jet(2.0, 3.0).unwrap();
        assert_eq!(j, FieldJet2 { value: 26.0, d_y: 21.0, d_z: 12.0, d_yy: 12.0, d_yz: 6.0, d_zz: 4.0 });
        assert!(ScalarField2::parse("0*y").unwrap().is_identically_zero());
        assert!(!ScalarField2::parse("y").unwrap().is_identically_zero());
    }
}

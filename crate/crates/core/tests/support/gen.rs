//! Seeded generator of well-typed random programs over numbers, booleans
//! and lists of numbers.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const MAX_DEPTH: u32 = 5;

pub struct Gen {
    rng: ChaCha8Rng,
    scope: Vec<String>,
    fresh: usize,
}

impl Gen {
    pub fn new(rng: ChaCha8Rng) -> Gen {
        Gen {
            rng,
            scope: Vec::new(),
            fresh: 0,
        }
    }

    /// One to three top-level forms. A leading `define` binds a number
    /// that later forms may refer to.
    pub fn program(&mut self) -> String {
        self.scope.clear();
        let mut forms = Vec::new();
        if self.rng.gen_bool(0.3) {
            let name = self.fresh_name();
            forms.push(format!("(define {name} {})", self.num(2)));
            self.scope.push(name);
        }
        let extra = self.rng.gen_range(0..2);
        for _ in 0..extra {
            forms.push(self.any(MAX_DEPTH - 1));
        }
        forms.push(self.any(MAX_DEPTH));
        forms.join("\n")
    }

    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn any(&mut self, d: u32) -> String {
        match self.rng.gen_range(0..3) {
            0 => self.num(d),
            1 => self.boolean(d),
            _ => self.list(d),
        }
    }

    pub fn num(&mut self, d: u32) -> String {
        if d == 0 || self.rng.gen_bool(0.25) {
            if !self.scope.is_empty() && self.rng.gen_bool(0.4) {
                return self.scope.choose(&mut self.rng).unwrap().clone();
            }
            return self.rng.gen_range(-20..=20).to_string();
        }
        let d = d - 1;
        match self.rng.gen_range(0..8) {
            0 | 1 => {
                let op = ["+", "-", "*"].choose(&mut self.rng).unwrap();
                let n = self.rng.gen_range(1..=3);
                let args: Vec<String> = (0..n).map(|_| self.num(d)).collect();
                format!("({op} {})", args.join(" "))
            }
            2 => format!("(if {} {} {})", self.boolean(d), self.num(d), self.num(d)),
            3 => {
                let x = self.fresh_name();
                let arg = self.num(d);
                self.scope.push(x.clone());
                let body = self.num(d);
                self.scope.pop();
                format!("((lambda ({x}) {body}) {arg})")
            }
            4 => format!("(begin {} {})", self.any(d), self.num(d)),
            5 => format!("(car {})", self.nonempty_list(d)),
            6 => format!("(abs {})", self.num(d)),
            _ => {
                let x = self.fresh_name();
                let y = self.fresh_name();
                let (a, b) = (self.num(d), self.num(d));
                self.scope.push(x.clone());
                self.scope.push(y.clone());
                let body = self.num(d);
                self.scope.truncate(self.scope.len() - 2);
                format!("((lambda ({x} {y}) {body}) {a} {b})")
            }
        }
    }

    pub fn boolean(&mut self, d: u32) -> String {
        if d == 0 || self.rng.gen_bool(0.2) {
            return if self.rng.gen() { "#t" } else { "#f" }.into();
        }
        let d = d - 1;
        match self.rng.gen_range(0..5) {
            0 | 1 => {
                let op = ["<", ">", "=", "<=", ">="].choose(&mut self.rng).unwrap();
                format!("({op} {} {})", self.num(d), self.num(d))
            }
            2 => {
                let op = ["null?", "pair?"].choose(&mut self.rng).unwrap();
                format!("({op} {})", self.list(d))
            }
            3 => format!("(not {})", self.boolean(d)),
            _ => format!(
                "(if {} {} {})",
                self.boolean(d),
                self.boolean(d),
                self.boolean(d)
            ),
        }
    }

    pub fn list(&mut self, d: u32) -> String {
        if d == 0 || self.rng.gen_bool(0.15) {
            return "'()".into();
        }
        let d = d - 1;
        match self.rng.gen_range(0..4) {
            0 => format!("(cdr {})", self.nonempty_list(d)),
            1 => format!("(if {} {} {})", self.boolean(d), self.list(d), self.list(d)),
            _ => self.nonempty_list(d + 1),
        }
    }

    fn nonempty_list(&mut self, d: u32) -> String {
        if d == 0 {
            return format!("(list {})", self.rng.gen_range(-9..=9));
        }
        let d = d - 1;
        if self.rng.gen_bool(0.5) {
            let n = self.rng.gen_range(1..=3);
            let items: Vec<String> = (0..n).map(|_| self.num(d)).collect();
            format!("(list {})", items.join(" "))
        } else {
            format!("(cons {} {})", self.num(d), self.list(d))
        }
    }
}

//! English Snowball (Porter2) stemmer, current revision of the algorithm.
//!
//! Works on ASCII bytes; `Y` marks a `y` that behaves as a consonant. R1/R2 marks are computed
//! once on the input and kept as absolute positions while the word shrinks, exactly as the
//! reference implementation does.

/// Stems a single lowercase ASCII word. Non-ASCII input is returned unchanged.
pub fn porter2(word: &str) -> String {
    if !word.is_ascii() {
        return word.to_string();
    }
    if let Some(special) = exception(word) {
        return special.to_string();
    }
    if word.len() < 3 {
        return word.to_string();
    }

    let mut w: Vec<u8> = word.as_bytes().to_vec();
    if w.first() == Some(&b'\'') {
        w.remove(0);
    }
    let y_found = mark_consonant_y(&mut w);
    let (p1, p2) = regions(&w);
    let mut s = Stem { w, p1, p2 };

    s.step_1a();
    s.step_1b();
    s.step_1c();
    s.step_2();
    s.step_3();
    s.step_4();
    s.step_5();

    if y_found {
        for b in &mut s.w {
            if *b == b'Y' {
                *b = b'y';
            }
        }
    }
    String::from_utf8(s.w).expect("ascii in, ascii out")
}

fn exception(word: &str) -> Option<&str> {
    Some(match word {
        "skis" => "ski",
        "skies" => "sky",
        "idly" => "idl",
        "gently" => "gentl",
        "ugly" => "ugli",
        "early" => "earli",
        "only" => "onli",
        "singly" => "singl",
        "andes" | "atlas" | "bias" | "cosmos" | "howe" | "news" | "sky" => word,
        _ => return None,
    })
}

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

fn is_vowel_wxy(b: u8) -> bool {
    is_vowel(b) || matches!(b, b'w' | b'x' | b'Y')
}

fn is_valid_li(b: u8) -> bool {
    matches!(b, b'c' | b'd' | b'e' | b'g' | b'h' | b'k' | b'm' | b'n' | b'r' | b't')
}

/// Initial `y` and `y` after a vowel become `Y`.
fn mark_consonant_y(w: &mut [u8]) -> bool {
    let mut found = false;
    if w.first() == Some(&b'y') {
        w[0] = b'Y';
        found = true;
    }
    for i in 1..w.len() {
        if w[i] == b'y' && is_vowel(w[i - 1]) {
            w[i] = b'Y';
            found = true;
        }
    }
    found
}

/// Position after the first non-vowel following a vowel, searching from `from`.
fn region_start(w: &[u8], from: usize) -> Option<usize> {
    let vowel = from + w.get(from..)?.iter().position(|&b| is_vowel(b))?;
    let consonant = vowel + 1 + w[vowel + 1..].iter().position(|&b| !is_vowel(b))?;
    Some(consonant + 1)
}

fn regions(w: &[u8]) -> (usize, usize) {
    const PREFIXES: [&[u8]; 9] =
        [b"arsen", b"commun", b"emerg", b"gener", b"inter", b"later", b"organ", b"past", b"univers"];
    let n = w.len();
    let p1 = match PREFIXES.iter().find(|p| w.starts_with(p)) {
        Some(p) => p.len(),
        None => match region_start(w, 0) {
            Some(p) => p,
            None => return (n, n),
        },
    };
    let p2 = region_start(w, p1).unwrap_or(n);
    (p1, p2)
}

/// Longest suffix of `w` found in `table`, with its tag.
fn longest_suffix<T: Copy>(w: &[u8], table: &[(&[u8], T)]) -> Option<(usize, T)> {
    table.iter().filter(|(s, _)| w.ends_with(s)).max_by_key(|(s, _)| s.len()).map(|(s, tag)| (w.len() - s.len(), *tag))
}

/// Short syllable ending at `end`.
fn short_syllable(w: &[u8], end: usize) -> bool {
    let w = &w[..end];
    let n = w.len();
    if n >= 3 && !is_vowel_wxy(w[n - 1]) && is_vowel(w[n - 2]) && !is_vowel(w[n - 3]) {
        return true;
    }
    if n == 2 && !is_vowel(w[1]) && is_vowel(w[0]) {
        return true;
    }
    w.ends_with(b"past")
}

struct Stem {
    w: Vec<u8>,
    p1: usize,
    p2: usize,
}

#[derive(Clone, Copy)]
enum Step1b {
    Eed,
    Ed,
    Ing,
}

#[derive(Clone, Copy)]
enum Rule {
    To(&'static [u8]),
    Delete,
    /// `ogi` -> `og` after `l`
    Ogi,
    /// delete `li` after a valid li-ending
    Li,
    /// delete only in R2
    DeleteInR2,
    /// delete `ion` after `s` or `t`
    Ion,
}

impl Stem {
    fn replace_from(&mut self, start: usize, with: &[u8]) {
        self.w.truncate(start);
        self.w.extend_from_slice(with);
    }

    fn step_1a(&mut self) {
        if let Some((start, ())) = longest_suffix(&self.w, &[(b"'", ()), (b"'s'", ()), (b"'s", ())]) {
            self.w.truncate(start);
        }
        #[derive(Clone, Copy)]
        enum A {
            Sses,
            Ies,
            Keep,
            S,
        }
        let table: [(&[u8], A); 6] =
            [(b"sses", A::Sses), (b"ied", A::Ies), (b"ies", A::Ies), (b"ss", A::Keep), (b"us", A::Keep), (b"s", A::S)];
        match longest_suffix(&self.w, &table) {
            Some((start, A::Sses)) => self.replace_from(start, b"ss"),
            Some((start, A::Ies)) => {
                let with: &[u8] = if start >= 2 { b"i" } else { b"ie" };
                self.replace_from(start, with);
            }
            Some((start, A::S)) => {
                if start >= 1 && self.w[..start - 1].iter().any(|&b| is_vowel(b)) {
                    self.w.truncate(start);
                }
            }
            Some((_, A::Keep)) | None => {}
        }
    }

    fn step_1b(&mut self) {
        let table: [(&[u8], Step1b); 6] = [
            (b"eed", Step1b::Eed),
            (b"eedly", Step1b::Eed),
            (b"ed", Step1b::Ed),
            (b"edly", Step1b::Ed),
            (b"ingly", Step1b::Ed),
            (b"ing", Step1b::Ing),
        ];
        let Some((start, kind)) = longest_suffix(&self.w, &table) else {
            return;
        };
        match kind {
            Step1b::Eed => {
                if start >= self.p1 {
                    let stem = &self.w[..start];
                    if !matches!(stem, b"succ" | b"proc" | b"exc") {
                        self.replace_from(start, b"ee");
                    }
                }
                return;
            }
            Step1b::Ing => {
                let stem = &self.w[..start];
                if matches!(stem, b"even" | b"cann" | b"inn" | b"earr" | b"herr" | b"out") {
                    return;
                }
                // C + y + ing, e.g. dying -> die
                if stem.len() == 2 && stem[1] == b'y' && !is_vowel(stem[0]) {
                    self.replace_from(1, b"ie");
                    return;
                }
            }
            Step1b::Ed => {}
        }

        if !self.w[..start].iter().any(|&b| is_vowel(b)) {
            return;
        }
        self.w.truncate(start);
        let w = &self.w;
        if w.ends_with(b"at") || w.ends_with(b"bl") || w.ends_with(b"iz") {
            self.w.push(b'e');
            return;
        }
        const DOUBLES: [&[u8]; 9] = [b"bb", b"dd", b"ff", b"gg", b"mm", b"nn", b"pp", b"rr", b"tt"];
        if DOUBLES.iter().any(|d| w.ends_with(d)) {
            if w.len() == 3 && matches!(w[0], b'a' | b'e' | b'o') {
                return;
            }
            self.w.pop();
            return;
        }
        if start == self.p1 && short_syllable(w, w.len()) {
            self.w.push(b'e');
        }
    }

    fn step_1c(&mut self) {
        let n = self.w.len();
        if n >= 3 && matches!(self.w[n - 1], b'y' | b'Y') && !is_vowel(self.w[n - 2]) {
            self.w[n - 1] = b'i';
        }
    }

    fn apply(&mut self, table: &[(&[u8], Rule)], region: usize) {
        let Some((start, rule)) = longest_suffix(&self.w, table) else {
            return;
        };
        if start < region {
            return;
        }
        match rule {
            Rule::To(with) => self.replace_from(start, with),
            Rule::Delete => self.w.truncate(start),
            Rule::DeleteInR2 => {
                if start >= self.p2 {
                    self.w.truncate(start);
                }
            }
            Rule::Ogi => {
                if start >= 1 && self.w[start - 1] == b'l' {
                    self.replace_from(start, b"og");
                }
            }
            Rule::Li => {
                if start >= 1 && is_valid_li(self.w[start - 1]) {
                    self.w.truncate(start);
                }
            }
            Rule::Ion => {
                if start >= 1 && matches!(self.w[start - 1], b's' | b't') {
                    self.w.truncate(start);
                }
            }
        }
    }

    fn step_2(&mut self) {
        use Rule::*;
        let table: [(&[u8], Rule); 25] = [
            (b"tional", To(b"tion")),
            (b"enci", To(b"ence")),
            (b"anci", To(b"ance")),
            (b"abli", To(b"able")),
            (b"entli", To(b"ent")),
            (b"izer", To(b"ize")),
            (b"ization", To(b"ize")),
            (b"ational", To(b"ate")),
            (b"ation", To(b"ate")),
            (b"ator", To(b"ate")),
            (b"alli", To(b"al")),
            (b"aliti", To(b"al")),
            (b"alism", To(b"al")),
            (b"fulli", To(b"ful")),
            (b"fulness", To(b"ful")),
            (b"ousli", To(b"ous")),
            (b"ousness", To(b"ous")),
            (b"iviti", To(b"ive")),
            (b"iveness", To(b"ive")),
            (b"bli", To(b"ble")),
            (b"biliti", To(b"ble")),
            (b"ogist", To(b"og")),
            (b"ogi", Ogi),
            (b"lessli", To(b"less")),
            (b"li", Li),
        ];
        self.apply(&table, self.p1);
    }

    fn step_3(&mut self) {
        use Rule::*;
        let table: [(&[u8], Rule); 9] = [
            (b"tional", To(b"tion")),
            (b"ational", To(b"ate")),
            (b"alize", To(b"al")),
            (b"icate", To(b"ic")),
            (b"iciti", To(b"ic")),
            (b"ical", To(b"ic")),
            (b"ful", Delete),
            (b"ness", Delete),
            (b"ative", DeleteInR2),
        ];
        self.apply(&table, self.p1);
    }

    fn step_4(&mut self) {
        use Rule::*;
        let table: [(&[u8], Rule); 18] = [
            (b"al", Delete),
            (b"ance", Delete),
            (b"ence", Delete),
            (b"er", Delete),
            (b"ic", Delete),
            (b"able", Delete),
            (b"ible", Delete),
            (b"ant", Delete),
            (b"ement", Delete),
            (b"ment", Delete),
            (b"ent", Delete),
            (b"ism", Delete),
            (b"ate", Delete),
            (b"iti", Delete),
            (b"ous", Delete),
            (b"ive", Delete),
            (b"ize", Delete),
            (b"ion", Ion),
        ];
        self.apply(&table, self.p2);
    }

    fn step_5(&mut self) {
        let n = self.w.len();
        match self.w.last() {
            Some(b'e') => {
                let start = n - 1;
                if start >= self.p2 || (start >= self.p1 && !short_syllable(&self.w, start)) {
                    self.w.truncate(start);
                }
            }
            Some(b'l') => {
                let start = n - 1;
                if start >= self.p2 && start >= 1 && self.w[start - 1] == b'l' {
                    self.w.truncate(start);
                }
            }
            _ => {}
        }
    }
}

//! Identifier extraction.
//!
//! Each language gets a small scanner description: comment markers, string delimiters,
//! how `'` behaves and the keyword list. A single generic scanner walks the source with it,
//! skipping comments, string/char/numeric literals, and returns every identifier-class token
//! that is not a keyword. This is lexical only; no parsing or scope resolution happens.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::keywords;
use super::language::Language;

#[derive(Debug, Clone, Copy)]
struct StringRule {
    open: &'static str,
    close: &'static str,
    /// Backslash escapes the next character.
    escapes: bool,
    /// A doubled close delimiter stands for one literal delimiter (C# verbatim strings).
    doubled_close: bool,
    multiline: bool,
}

const fn string(open: &'static str, close: &'static str) -> StringRule {
    StringRule { open, close, escapes: true, doubled_close: false, multiline: false }
}

const fn multiline(open: &'static str, close: &'static str) -> StringRule {
    StringRule { open, close, escapes: true, doubled_close: false, multiline: true }
}

const fn verbatim(open: &'static str, close: &'static str) -> StringRule {
    StringRule { open, close, escapes: false, doubled_close: false, multiline: true }
}

/// How a single quote that is not covered by a string rule is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quote {
    /// Always a string rule (listed in `strings`).
    String,
    /// `'x'` / `'\n'` are char literals, anything else is a lifetime or symbol marker whose
    /// name is dropped (Rust lifetimes, Scala symbols).
    CharOrMarker,
    /// `'` continues identifiers (`foldl'`); at token start it opens a char literal.
    Prime,
    /// No special meaning.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RawStrings {
    None,
    /// `r"..."`, `r#"..."#`, `br"..."`
    Rust,
    /// `R"delim(...)delim"`
    Cpp,
}

struct Syntax {
    line_comments: &'static [&'static str],
    block_comments: &'static [(&'static str, &'static str)],
    nested_blocks: bool,
    /// Block comments that must start at the beginning of a line (Ruby `=begin`/`=end`).
    line_start_blocks: &'static [(&'static str, &'static str)],
    /// `#` only opens a comment at the start of a word (shell: `$#`, `${#x}`).
    hash_needs_boundary: bool,
    /// Ordered longest-open-first.
    strings: &'static [StringRule],
    /// Identifiers that turn a directly following quote into a string (`f"..."`, `b'...'`).
    string_prefixes: &'static [&'static str],
    quote: Quote,
    raw: RawStrings,
    keywords: &'static [&'static str],
    case_insensitive_keywords: bool,
}

const C_BLOCK: &[(&str, &str)] = &[("/*", "*/")];
const SLASH_LINE: &[&str] = &["//"];
const HASH_LINE: &[&str] = &["#"];
const C_STRINGS: &[StringRule] = &[string("\"", "\""), string("'", "'")];

fn syntax(lang: Language) -> Option<&'static Syntax> {
    const C: Syntax = Syntax {
        line_comments: SLASH_LINE,
        block_comments: C_BLOCK,
        nested_blocks: false,
        line_start_blocks: &[],
        hash_needs_boundary: false,
        strings: C_STRINGS,
        string_prefixes: &["L", "u", "U", "u8"],
        quote: Quote::String,
        raw: RawStrings::None,
        keywords: keywords::C,
        case_insensitive_keywords: false,
    };
    const CPP: Syntax = Syntax { raw: RawStrings::Cpp, keywords: keywords::CPP, ..C };
    const CSHARP: Syntax = Syntax {
        strings: &[
            verbatim("\"\"\"", "\"\"\""),
            StringRule { open: "@\"", close: "\"", escapes: false, doubled_close: true, multiline: true },
            StringRule { open: "$@\"", close: "\"", escapes: false, doubled_close: true, multiline: true },
            StringRule { open: "@$\"", close: "\"", escapes: false, doubled_close: true, multiline: true },
            string("$\"", "\""),
            string("\"", "\""),
            string("'", "'"),
        ],
        string_prefixes: &[],
        keywords: keywords::CSHARP,
        ..C
    };
    const GO: Syntax = Syntax {
        strings: &[string("\"", "\""), string("'", "'"), verbatim("`", "`")],
        string_prefixes: &[],
        keywords: keywords::GO,
        ..C
    };
    const HASKELL: Syntax = Syntax {
        line_comments: &["--"],
        block_comments: &[("{-", "-}")],
        nested_blocks: true,
        strings: &[string("\"", "\"")],
        string_prefixes: &[],
        quote: Quote::Prime,
        keywords: keywords::HASKELL,
        ..C
    };
    const JAVA: Syntax = Syntax {
        strings: &[multiline("\"\"\"", "\"\"\""), string("\"", "\""), string("'", "'")],
        string_prefixes: &[],
        keywords: keywords::JAVA,
        ..C
    };
    const JAVASCRIPT: Syntax = Syntax {
        strings: &[string("\"", "\""), string("'", "'"), multiline("`", "`")],
        string_prefixes: &[],
        keywords: keywords::JAVASCRIPT,
        ..C
    };
    const TYPESCRIPT: Syntax = Syntax { keywords: keywords::TYPESCRIPT, ..JAVASCRIPT };
    const KOTLIN: Syntax = Syntax {
        nested_blocks: true,
        strings: &[multiline("\"\"\"", "\"\"\""), string("\"", "\""), string("'", "'")],
        string_prefixes: &[],
        keywords: keywords::KOTLIN,
        ..C
    };
    const PHP: Syntax = Syntax {
        line_comments: &["//", "#"],
        strings: &[multiline("\"", "\""), multiline("'", "'"), multiline("`", "`")],
        string_prefixes: &[],
        keywords: keywords::PHP,
        case_insensitive_keywords: true,
        ..C
    };
    const PYTHON: Syntax = Syntax {
        line_comments: HASH_LINE,
        block_comments: &[],
        strings: &[multiline("\"\"\"", "\"\"\""), multiline("'''", "'''"), string("\"", "\""), string("'", "'")],
        string_prefixes: &[
            "r", "u", "b", "f", "br", "rb", "fr", "rf", "R", "U", "B", "F", "Br", "bR", "BR", "Rb", "rB", "RB", "Fr",
            "fR", "FR", "Rf", "rF", "RF",
        ],
        keywords: keywords::PYTHON,
        ..C
    };
    const RUBY: Syntax = Syntax {
        line_comments: HASH_LINE,
        block_comments: &[],
        line_start_blocks: &[("=begin", "=end")],
        strings: &[multiline("\"", "\""), multiline("'", "'"), multiline("`", "`")],
        string_prefixes: &[],
        keywords: keywords::RUBY,
        ..C
    };
    const RUST: Syntax = Syntax {
        nested_blocks: true,
        strings: &[multiline("\"", "\"")],
        string_prefixes: &["b", "c"],
        quote: Quote::CharOrMarker,
        raw: RawStrings::Rust,
        keywords: keywords::RUST,
        ..C
    };
    const SCALA: Syntax = Syntax {
        nested_blocks: true,
        strings: &[multiline("\"\"\"", "\"\"\""), string("\"", "\"")],
        string_prefixes: &["s", "f", "raw"],
        quote: Quote::CharOrMarker,
        keywords: keywords::SCALA,
        ..C
    };
    const SHELL: Syntax = Syntax {
        line_comments: HASH_LINE,
        block_comments: &[],
        hash_needs_boundary: true,
        strings: &[multiline("\"", "\""), verbatim("'", "'")],
        string_prefixes: &[],
        quote: Quote::String,
        keywords: keywords::SHELL,
        ..C
    };
    const SWIFT: Syntax = Syntax {
        nested_blocks: true,
        strings: &[multiline("\"\"\"", "\"\"\""), string("\"", "\"")],
        string_prefixes: &[],
        quote: Quote::Plain,
        keywords: keywords::SWIFT,
        ..C
    };

    Some(match lang {
        Language::C => &C,
        Language::CSharp => &CSHARP,
        Language::Cpp => &CPP,
        Language::Go => &GO,
        Language::Haskell => &HASKELL,
        Language::Java => &JAVA,
        Language::JavaScript => &JAVASCRIPT,
        Language::Kotlin => &KOTLIN,
        Language::Php => &PHP,
        Language::Python => &PYTHON,
        Language::Ruby => &RUBY,
        Language::Rust => &RUST,
        Language::Scala => &SCALA,
        Language::Shell => &SHELL,
        Language::Swift => &SWIFT,
        Language::TypeScript => &TYPESCRIPT,
        Language::Unknown => return None,
    })
}

fn keyword_set(lang: Language) -> &'static HashSet<&'static str> {
    static SETS: OnceLock<Vec<HashSet<&'static str>>> = OnceLock::new();
    let sets = SETS.get_or_init(|| {
        Language::SUPPORTED
            .iter()
            .map(|&l| syntax(l).map(|s| s.keywords.iter().copied().collect()).unwrap_or_default())
            .collect()
    });
    let idx =
        Language::SUPPORTED.iter().position(|&l| l == lang).expect("keyword sets exist only for supported languages");
    &sets[idx]
}

/// Whether `word` is a reserved word of `lang`. Always false for `Unknown`.
pub fn is_keyword(lang: Language, word: &str) -> bool {
    let Some(syn) = syntax(lang) else {
        return false;
    };
    let set = keyword_set(lang);
    if syn.case_insensitive_keywords {
        set.contains(word.to_ascii_lowercase().as_str())
    } else {
        set.contains(word)
    }
}

/// Returns the identifier tokens of `source` in order, or `None` for `Unknown`.
pub(crate) fn identifiers(lang: Language, source: &str) -> Option<Vec<String>> {
    let syn = syntax(lang)?;
    let mut scanner = Scanner { src: source.chars().collect(), pos: 0, syn };
    let mut out = Vec::new();
    while let Some(tok) = scanner.next_identifier() {
        if !is_keyword(lang, &tok) {
            out.push(tok);
        }
    }
    Some(out)
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

struct Scanner {
    src: Vec<char>,
    pos: usize,
    syn: &'static Syntax,
}

impl Scanner {
    fn peek(&self, offset: usize) -> Option<char> {
        self.src.get(self.pos + offset).copied()
    }

    fn starts_with(&self, at: usize, pat: &str) -> bool {
        pat.chars().enumerate().all(|(i, c)| self.src.get(at + i) == Some(&c))
    }

    fn at_line_start(&self) -> bool {
        self.pos == 0 || self.src[self.pos - 1] == '\n'
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            self.pos += 1;
        }
    }

    fn skip_block(&mut self, open: &str, close: &str) {
        let open_len = open.chars().count();
        let close_len = close.chars().count();
        self.pos += open_len;
        let mut depth = 1usize;
        while self.pos < self.src.len() {
            if self.starts_with(self.pos, close) {
                self.pos += close_len;
                depth -= 1;
                if depth == 0 {
                    return;
                }
            } else if self.syn.nested_blocks && self.starts_with(self.pos, open) {
                self.pos += open_len;
                depth += 1;
            } else {
                self.pos += 1;
            }
        }
    }

    fn skip_string(&mut self, rule: &StringRule) {
        self.pos += rule.open.chars().count();
        let close_len = rule.close.chars().count();
        while let Some(c) = self.peek(0) {
            if rule.escapes && c == '\\' {
                self.pos += 2;
                continue;
            }
            if self.starts_with(self.pos, rule.close) {
                if rule.doubled_close && self.starts_with(self.pos + close_len, rule.close) {
                    self.pos += 2 * close_len;
                    continue;
                }
                self.pos += close_len;
                return;
            }
            if c == '\n' && !rule.multiline {
                // Unterminated single-line literal: resume on the next line.
                return;
            }
            self.pos += 1;
        }
        self.pos = self.pos.min(self.src.len());
    }

    fn string_rule_at(&self, at: usize) -> Option<&'static StringRule> {
        self.syn.strings.iter().find(|r| self.starts_with(at, r.open))
    }

    fn skip_number(&mut self) {
        while let Some(c) = self.peek(0) {
            if is_ident_continue(c) || c == '.' && self.peek(1).is_some_and(|n| n.is_ascii_digit()) {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Consumes a Rust raw string starting at `self.pos` (after the `r`/`br` prefix),
    /// returning false if this is not one.
    fn try_rust_raw(&mut self) -> bool {
        let mut i = self.pos;
        let mut hashes = 0;
        while self.src.get(i) == Some(&'#') {
            hashes += 1;
            i += 1;
        }
        if self.src.get(i) != Some(&'"') {
            return false;
        }
        i += 1;
        while i < self.src.len() {
            if self.src[i] == '"' && (1..=hashes).all(|k| self.src.get(i + k) == Some(&'#')) {
                self.pos = i + 1 + hashes;
                return true;
            }
            i += 1;
        }
        self.pos = self.src.len();
        true
    }

    /// Consumes a C++ raw string `"delim( ... )delim"` starting at the quote.
    fn try_cpp_raw(&mut self) -> bool {
        if self.peek(0) != Some('"') {
            return false;
        }
        let mut i = self.pos + 1;
        let mut delim = String::new();
        while let Some(&c) = self.src.get(i) {
            if c == '(' {
                break;
            }
            if c.is_whitespace() || c == ')' || c == '\\' || delim.len() > 16 {
                return false;
            }
            delim.push(c);
            i += 1;
        }
        let close = format!("){delim}\"");
        while i < self.src.len() {
            if self.starts_with(i, &close) {
                self.pos = i + close.chars().count();
                return true;
            }
            i += 1;
        }
        self.pos = self.src.len();
        true
    }

    /// Handles `'` for languages where it is a char literal or a marker. Returns true when
    /// the following identifier should be dropped (lifetimes, symbols).
    fn skip_quote(&mut self) -> bool {
        match (self.peek(1), self.peek(2)) {
            (Some('\\'), _) => {
                self.skip_string(&string("'", "'"));
                false
            }
            (Some(_), Some('\'')) => {
                self.pos += 3;
                false
            }
            _ => {
                self.pos += 1;
                true
            }
        }
    }

    fn read_identifier(&mut self) -> String {
        let start = self.pos;
        self.pos += 1;
        while let Some(c) = self.peek(0) {
            if is_ident_continue(c) || (self.syn.quote == Quote::Prime && c == '\'') {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos].iter().collect()
    }

    fn next_identifier(&mut self) -> Option<String> {
        let mut drop_next = false;
        while let Some(c) = self.peek(0) {
            if !self.syn.line_start_blocks.is_empty() && self.at_line_start() {
                if let Some(&(open, close)) =
                    self.syn.line_start_blocks.iter().find(|(open, _)| self.starts_with(self.pos, open))
                {
                    self.skip_line_start_block(open, close);
                    continue;
                }
            }
            if let Some(&(open, close)) =
                self.syn.block_comments.iter().find(|(open, _)| self.starts_with(self.pos, open))
            {
                self.skip_block(open, close);
                continue;
            }
            if self.syn.line_comments.iter().any(|m| self.starts_with(self.pos, m)) {
                let boundary_ok = !self.syn.hash_needs_boundary
                    || c != '#'
                    || self.pos == 0
                    || self.src[self.pos - 1].is_whitespace()
                    || matches!(self.src[self.pos - 1], ';' | '(' | '|' | '&');
                if boundary_ok {
                    self.skip_line();
                    continue;
                }
                self.pos += 1;
                continue;
            }
            if c == '\'' && matches!(self.syn.quote, Quote::CharOrMarker | Quote::Prime) {
                let marker = self.skip_quote();
                drop_next = marker && self.syn.quote == Quote::CharOrMarker;
                continue;
            }
            if let Some(rule) = self.string_rule_at(self.pos) {
                self.skip_string(rule);
                continue;
            }
            if c.is_ascii_digit() {
                self.skip_number();
                continue;
            }
            if is_ident_start(c) {
                let ident = self.read_identifier();
                if self.consume_prefixed_literal(&ident) {
                    continue;
                }
                if std::mem::take(&mut drop_next) {
                    continue;
                }
                return Some(ident);
            }
            drop_next = false;
            self.pos += 1;
        }
        None
    }

    fn skip_line_start_block(&mut self, open: &str, close: &str) {
        self.pos += open.chars().count();
        loop {
            self.skip_line();
            if self.pos >= self.src.len() {
                return;
            }
            self.pos += 1;
            if self.starts_with(self.pos, close) {
                self.skip_line();
                return;
            }
        }
    }

    /// After reading `ident`, consumes a literal it prefixes (`f"..."`, `r#"..."#`,
    /// `R"(...)"`). Returns true if one was consumed.
    fn consume_prefixed_literal(&mut self, ident: &str) -> bool {
        let raw = self.syn.raw;
        match raw {
            RawStrings::Rust if matches!(ident, "r" | "br" | "cr") => {
                if self.try_rust_raw() {
                    return true;
                }
                if ident == "r" && self.peek(0) == Some('#') && self.peek(1).is_some_and(is_ident_start) {
                    // raw identifier `r#type`: the name itself follows
                    self.pos += 1;
                    return true;
                }
            }
            RawStrings::Cpp if matches!(ident, "R" | "LR" | "uR" | "UR" | "u8R") && self.try_cpp_raw() => {
                return true;
            }
            _ => {}
        }
        if self.syn.string_prefixes.contains(&ident) {
            if let Some(rule) = self.string_rule_at(self.pos) {
                self.skip_string(rule);
                return true;
            }
            if self.syn.quote == Quote::CharOrMarker && self.peek(0) == Some('\'') {
                // byte literal b'x'
                self.skip_quote();
                return true;
            }
        }
        false
    }
}

//! Pretrained subword-aware sub-token embeddings.
//!
//! Text format:
//!
//! ```text
//! dim min_n max_n vocab_count ngram_count [buckets]
//! token v1 ... v_dim              (vocab_count lines)
//! #gram v1 ... v_dim              (ngram_count lines; `#<bucket id>` when buckets is given)
//! ```
//!
//! Out-of-vocabulary sub-tokens are embedded as the mean of the vectors of their
//! character n-grams, taken over the boundary-marked form `<token>`.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_DIM: usize = 100;
pub const DEFAULT_NGRAM_RANGE: (usize, usize) = (3, 6);

#[derive(Debug, Clone, PartialEq)]
pub enum NgramTable {
    /// Keyed by the n-gram string itself.
    Keyed(HashMap<String, Vec<f64>>),
    /// Keyed by `fnv1a_32(ngram) % buckets`.
    Hashed { buckets: u64, rows: HashMap<u64, Vec<f64>> },
}

impl NgramTable {
    fn len(&self) -> usize {
        match self {
            NgramTable::Keyed(rows) => rows.len(),
            NgramTable::Hashed { rows, .. } => rows.len(),
        }
    }

    fn get(&self, gram: &str) -> Option<&[f64]> {
        match self {
            NgramTable::Keyed(rows) => rows.get(gram).map(Vec::as_slice),
            NgramTable::Hashed { buckets, rows } => rows.get(&(u64::from(fnv1a_32(gram)) % buckets)).map(Vec::as_slice),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    dim: usize,
    ngram_range: (usize, usize),
    vocab: HashMap<String, Vec<f64>>,
    ngrams: NgramTable,
}

/// 32-bit FNV-1a over the UTF-8 bytes of `s`.
pub fn fnv1a_32(s: &str) -> u32 {
    let mut hash: u32 = 0x811c_9dc5;
    for &b in s.as_bytes() {
        hash ^= u32::from(b);
        hash = hash.wrapping_mul(0x0100_0193);
    }
    hash
}

/// Character n-grams of `<token>` with lengths in `min_n..=max_n`, in enumeration order and
/// with repetitions. The bare boundary markers are never emitted as grams.
pub fn char_ngrams(token: &str, min_n: usize, max_n: usize) -> Vec<String> {
    let marked: Vec<char> = std::iter::once('<').chain(token.chars()).chain(std::iter::once('>')).collect();
    let mut grams = Vec::new();
    for start in 0..marked.len() {
        for n in min_n..=max_n {
            let end = start + n;
            if end > marked.len() {
                break;
            }
            if n == 1 && (marked[start] == '<' || marked[start] == '>') {
                continue;
            }
            grams.push(marked[start..end].iter().collect());
        }
    }
    grams
}

impl EmbeddingModel {
    pub fn new(
        dim: usize,
        ngram_range: (usize, usize),
        vocab: HashMap<String, Vec<f64>>,
        ngrams: NgramTable,
    ) -> Result<Self> {
        let model = EmbeddingModel { dim, ngram_range, vocab, ngrams };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let (min_n, max_n) = self.ngram_range;
        if self.dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        if min_n == 0 || min_n > max_n {
            return Err(Error::InvalidArgument(format!("invalid n-gram range ({min_n}, {max_n})")));
        }
        let rows: Box<dyn Iterator<Item = &Vec<f64>>> = match &self.ngrams {
            NgramTable::Keyed(rows) => Box::new(self.vocab.values().chain(rows.values())),
            NgramTable::Hashed { rows, .. } => Box::new(self.vocab.values().chain(rows.values())),
        };
        for row in rows {
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: row.len(), line: None });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument("non-finite embedding component".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ngram_range(&self) -> (usize, usize) {
        self.ngram_range
    }

    pub fn vocab_len(&self) -> usize {
        self.vocab.len()
    }

    pub fn ngram_len(&self) -> usize {
        self.ngrams.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vocab.contains_key(token)
    }

    /// Vector for `subtoken`: the stored one when in vocabulary, otherwise the mean of its
    /// stored n-gram vectors, or `None` when no n-gram is known.
    pub fn embed(&self, subtoken: &str) -> Option<Vec<f64>> {
        if let Some(v) = self.vocab.get(subtoken) {
            return Some(v.clone());
        }
        let (min_n, max_n) = self.ngram_range;
        let mut sum = vec![0.0; self.dim];
        let mut found = 0usize;
        for gram in char_ngrams(subtoken, min_n, max_n) {
            if let Some(v) = self.ngrams.get(&gram) {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
                found += 1;
            }
        }
        if found == 0 {
            return None;
        }
        let n = found as f64;
        sum.iter_mut().for_each(|s| *s /= n);
        Some(sum)
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let (min_n, max_n) = self.ngram_range;
        write!(out, "{} {} {} {} {}", self.dim, min_n, max_n, self.vocab.len(), self.ngrams.len())?;
        if let NgramTable::Hashed { buckets, .. } = &self.ngrams {
            write!(out, " {buckets}")?;
        }
        writeln!(out)?;
        let mut vocab: Vec<_> = self.vocab.iter().collect();
        vocab.sort_by(|a, b| a.0.cmp(b.0));
        for (token, v) in vocab {
            write_row(&mut out, token, v)?;
        }
        match &self.ngrams {
            NgramTable::Keyed(rows) => {
                let mut rows: Vec<_> = rows.iter().collect();
                rows.sort_by(|a, b| a.0.cmp(b.0));
                for (gram, v) in rows {
                    write_row(&mut out, &format!("#{gram}"), v)?;
                }
            }
            NgramTable::Hashed { rows, .. } => {
                let mut rows: Vec<_> = rows.iter().collect();
                rows.sort_by_key(|r| *r.0);
                for (id, v) in rows {
                    write_row(&mut out, &format!("#{id}"), v)?;
                }
            }
        }
        Ok(())
    }
}

fn write_row<W: Write>(out: &mut W, key: &str, values: &[f64]) -> std::io::Result<()> {
    out.write_all(key.as_bytes())?;
    for v in values {
        write!(out, " {v}")?;
    }
    writeln!(out)
}

fn parse_row<'a>(line: &'a str, dim: usize, context: &str, line_no: usize) -> Result<(&'a str, Vec<f64>)> {
    let mut fields = line.split_whitespace();
    let key = fields.next().ok_or_else(|| Error::format(context, line_no, "empty row"))?;
    let values = fields
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::format(context, line_no, format!("invalid number `{f}`")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: values.len(), line: Some(line_no) });
    }
    Ok((key, values))
}

pub fn parse_model<R: BufRead>(input: R, context: &str) -> Result<EmbeddingModel> {
    let mut lines = input.lines().enumerate().map(|(i, l)| l.map(|l| (i + 1, l)).map_err(|e| Error::io(context, e)));

    let (_, header) = lines.next().transpose()?.ok_or_else(|| Error::format(context, 1, "missing header"))?;
    let fields = header
        .split_whitespace()
        .map(|f| f.parse::<u64>().map_err(|_| Error::format(context, 1, format!("invalid header field `{f}`"))))
        .collect::<Result<Vec<u64>>>()?;
    if !(5..=6).contains(&fields.len()) {
        return Err(Error::format(context, 1, "header must be `dim min_n max_n vocab_count ngram_count [buckets]`"));
    }
    let dim = fields[0] as usize;
    let (min_n, max_n) = (fields[1] as usize, fields[2] as usize);
    let (vocab_count, ngram_count) = (fields[3] as usize, fields[4] as usize);
    let buckets = fields.get(5).copied();
    if dim == 0 {
        return Err(Error::format(context, 1, "dim must be positive"));
    }
    if min_n == 0 || min_n > max_n {
        return Err(Error::format(context, 1, "n-gram range must satisfy 1 <= min_n <= max_n"));
    }
    if buckets == Some(0) {
        return Err(Error::format(context, 1, "bucket count must be positive"));
    }

    let mut next_row = |what: &str| -> Result<(usize, String)> {
        loop {
            match lines.next().transpose()? {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some(row) => return Ok(row),
                None => return Err(Error::format(context, 0, format!("unexpected end of file, expected {what}"))),
            }
        }
    };

    let mut vocab = HashMap::with_capacity(vocab_count);
    for _ in 0..vocab_count {
        let (line_no, line) = next_row("vocabulary row")?;
        let (token, v) = parse_row(&line, dim, context, line_no)?;
        if vocab.insert(token.to_string(), v).is_some() {
            return Err(Error::format(context, line_no, format!("duplicate token `{token}`")));
        }
    }

    let mut keyed = HashMap::new();
    let mut hashed = HashMap::new();
    for _ in 0..ngram_count {
        let (line_no, line) = next_row("n-gram row")?;
        let (key, v) = parse_row(&line, dim, context, line_no)?;
        let gram = key
            .strip_prefix('#')
            .filter(|g| !g.is_empty())
            .ok_or_else(|| Error::format(context, line_no, "n-gram rows must start with `#`"))?;
        let duplicate = match buckets {
            Some(b) => {
                let id: u64 =
                    gram.parse().map_err(|_| Error::format(context, line_no, format!("invalid bucket id `{gram}`")))?;
                if id >= b {
                    return Err(Error::format(context, line_no, format!("bucket id {id} out of range")));
                }
                hashed.insert(id, v).is_some()
            }
            None => keyed.insert(gram.to_string(), v).is_some(),
        };
        if duplicate {
            return Err(Error::format(context, line_no, format!("duplicate n-gram `{gram}`")));
        }
    }

    for row in lines {
        let (line_no, line) = row?;
        if !line.trim().is_empty() {
            return Err(Error::format(context, line_no, "unexpected trailing row"));
        }
    }

    let ngrams = match buckets {
        Some(buckets) => NgramTable::Hashed { buckets, rows: hashed },
        None => NgramTable::Keyed(keyed),
    };
    Ok(EmbeddingModel { dim, ngram_range: (min_n, max_n), vocab, ngrams })
}

pub fn load_model(path: &Path) -> Result<EmbeddingModel> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_model(BufReader::new(file), &path.display().to_string())
}

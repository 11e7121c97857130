use std::collections::HashMap;
use std::io::BufRead;

use rayon::prelude::*;

use super::SparseError;

/// Marker appended to a relation for the head-side (inverse) context.
pub const INVERSE_MARKER: &str = "⁻¹";

/// Raw word × context co-occurrence counts.
///
/// Merging is plain addition, so counts built from corpus shards combine to
/// the same table regardless of order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    cells: HashMap<String, HashMap<String, u64>>,
}

impl CooccurrenceCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, word: &str, context: &str, n: u64) {
        if n == 0 {
            return;
        }
        *self
            .cells
            .entry(word.to_string())
            .or_default()
            .entry(context.to_string())
            .or_insert(0) += n;
    }

    pub fn get(&self, word: &str, context: &str) -> u64 {
        self.cells
            .get(word)
            .and_then(|row| row.get(context))
            .copied()
            .unwrap_or(0)
    }

    pub fn merge(mut self, other: CooccurrenceCounts) -> Self {
        for (word, row) in other.cells {
            let dst = self.cells.entry(word).or_default();
            for (ctx, n) in row {
                *dst.entry(ctx).or_insert(0) += n;
            }
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.cells.values().flat_map(|row| row.values()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &HashMap<String, u64>)> {
        self.cells.iter().map(|(w, row)| (w.as_str(), row))
    }

    /// Symmetric window counts over one tokenized sentence: every token within
    /// `window` positions of an occurrence counts once as its context.
    pub fn add_window_sentence(&mut self, tokens: &[&str], window: usize) {
        for (i, word) in tokens.iter().enumerate() {
            let lo = i.saturating_sub(window);
            let hi = (i + window).min(tokens.len() - 1);
            for (j, ctx) in tokens.iter().enumerate().take(hi + 1).skip(lo) {
                if j != i {
                    self.add(word, ctx, 1);
                }
            }
        }
    }

    /// Window counts over lines of whitespace-tokenized text, one sentence per
    /// line. Lines are counted in parallel shards and merged.
    pub fn from_window_lines(lines: &[String], window: usize) -> Self {
        lines
            .par_chunks(4096)
            .map(|chunk| {
                let mut counts = CooccurrenceCounts::new();
                for line in chunk {
                    let tokens: Vec<&str> = line.split_whitespace().collect();
                    if !tokens.is_empty() {
                        counts.add_window_sentence(&tokens, window);
                    }
                }
                counts
            })
            .reduce(CooccurrenceCounts::new, CooccurrenceCounts::merge)
    }

    /// Dependency-arc counts from CoNLL-X / CoNLL-U rows.
    ///
    /// A token `w` attached to head `h` by relation `r` yields context `r:h`
    /// for `w` and `r⁻¹:w` for `h`. Root attachments (HEAD = 0) yield nothing.
    /// Comment lines, multiword ranges (`1-2`) and empty nodes (`1.1`) are
    /// skipped.
    pub fn from_conll<R: BufRead>(reader: R) -> Result<Self, SparseError> {
        let mut counts = CooccurrenceCounts::new();
        let mut sentence: Vec<ConllRow> = Vec::new();
        let mut rows_seen = 0usize;

        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                counts.add_sentence_arcs(&sentence)?;
                sentence.clear();
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            if let Some(row) = ConllRow::parse(line, line_no)? {
                sentence.push(row);
                rows_seen += 1;
            }
        }
        counts.add_sentence_arcs(&sentence)?;

        if rows_seen == 0 {
            return Err(SparseError::EmptyCorpus);
        }
        Ok(counts)
    }

    fn add_sentence_arcs(&mut self, sentence: &[ConllRow]) -> Result<(), SparseError> {
        for row in sentence {
            if row.head == 0 {
                continue;
            }
            let head = sentence.iter().find(|r| r.id == row.head).ok_or_else(|| {
                SparseError::MalformedRow {
                    line: row.line,
                    reason: format!(
                        "HEAD {} does not refer to a token in the sentence",
                        row.head
                    ),
                }
            })?;
            self.add(&row.form, &format!("{}:{}", row.deprel, head.form), 1);
            self.add(
                &head.form,
                &format!("{}{}:{}", row.deprel, INVERSE_MARKER, row.form),
                1,
            );
        }
        Ok(())
    }
}

#[derive(Debug)]
struct ConllRow {
    id: usize,
    form: String,
    head: usize,
    deprel: String,
    line: usize,
}

impl ConllRow {
    fn parse(line: &str, line_no: usize) -> Result<Option<ConllRow>, SparseError> {
        let cols: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else {
            line.split_whitespace().collect()
        };
        if cols.len() < 8 {
            return Err(SparseError::MalformedRow {
                line: line_no,
                reason: format!("expected at least 8 columns, found {}", cols.len()),
            });
        }
        if cols[0].contains('-') || cols[0].contains('.') {
            return Ok(None);
        }
        let id = cols[0]
            .parse::<usize>()
            .map_err(|_| SparseError::MalformedRow {
                line: line_no,
                reason: format!("non-integer ID {:?}", cols[0]),
            })?;
        let head = cols[6]
            .parse::<usize>()
            .map_err(|_| SparseError::MalformedRow {
                line: line_no,
                reason: format!("non-integer HEAD {:?}", cols[6]),
            })?;
        Ok(Some(ConllRow {
            id,
            form: cols[1].to_string(),
            head,
            deprel: cols[7].to_string(),
            line: line_no,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(text: &str, w: usize) -> CooccurrenceCounts {
        let lines: Vec<String> = text.lines().map(str::to_string).collect();
        CooccurrenceCounts::from_window_lines(&lines, w)
    }

    #[test]
    fn tiny_window_counts() {
        let c = window("a b c", 3);
        for (x, y) in [("a", "b"), ("a", "c"), ("b", "c")] {
            assert_eq!(c.get(x, y), 1);
            assert_eq!(c.get(y, x), 1);
        }
        assert_eq!(c.get("a", "a"), 0);
        assert_eq!(c.total(), 6);
    }

    #[test]
    fn line_boundaries_respected() {
        let c = window("a b\nc d", 3);
        assert_eq!(c.get("a", "c"), 0);
        assert_eq!(c.get("a", "b"), 1);
    }

    #[test]
    fn window_limit() {
        let c = window("a b c d e", 1);
        assert_eq!(c.get("a", "b"), 1);
        assert_eq!(c.get("a", "c"), 0);
        assert_eq!(c.get("c", "d"), 1);
    }

    #[test]
    fn single_arc() {
        let text = "1\tdog\tdog\tNOUN\tNN\t_\t2\tnsubj\t_\t_\n2\tbarks\tbark\tVERB\tVBZ\t_\t0\troot\t_\t_\n";
        let c = CooccurrenceCounts::from_conll(text.as_bytes()).unwrap();
        assert_eq!(c.get("dog", "nsubj:barks"), 1);
        assert_eq!(c.get("barks", "nsubj⁻¹:dog"), 1);
        assert_eq!(c.total(), 2);
    }

    #[test]
    fn root_only_sentence() {
        let text = "1\trun\trun\tVERB\tVB\t_\t0\troot\t_\t_\n";
        let c = CooccurrenceCounts::from_conll(text.as_bytes()).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn malformed_rows() {
        let bad_head = "1\tdog\tdog\tNOUN\tNN\t_\tx\tnsubj\t_\t_\n";
        match CooccurrenceCounts::from_conll(bad_head.as_bytes()).unwrap_err() {
            SparseError::MalformedRow { line, .. } => assert_eq!(line, 1),
            other => panic!("{other}"),
        }
        let short = "# comment\n1\tdog\tdog\n";
        match CooccurrenceCounts::from_conll(short.as_bytes()).unwrap_err() {
            SparseError::MalformedRow { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
        assert!(matches!(
            CooccurrenceCounts::from_conll("a b c\n".as_bytes()).unwrap_err(),
            SparseError::MalformedRow { .. }
        ));
        assert!(matches!(
            CooccurrenceCounts::from_conll("".as_bytes()).unwrap_err(),
            SparseError::EmptyCorpus
        ));
    }

    #[test]
    fn merge_is_addition() {
        let a = window("x y z", 2);
        let b = window("x y", 2);
        let ab = a.clone().merge(b.clone());
        let ba = b.merge(a);
        assert_eq!(ab, ba);
        assert_eq!(ab.get("x", "y"), 2);
    }
}

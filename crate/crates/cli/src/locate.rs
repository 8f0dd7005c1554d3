//! Maps a JSON path back to the line and column where its value starts.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    Key(&'static str),
    Index(usize),
}

/// A path from the document root to one value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JsonPath(Vec<Segment>);

impl JsonPath {
    pub fn root() -> Self {
        JsonPath(Vec::new())
    }

    pub fn key(&self, key: &'static str) -> Self {
        let mut next = self.clone();
        next.0.push(Segment::Key(key));
        next
    }

    pub fn index(&self, index: usize) -> Self {
        let mut next = self.clone();
        next.0.push(Segment::Index(index));
        next
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }
}

impl fmt::Display for JsonPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("document root");
        }
        for (k, seg) in self.0.iter().enumerate() {
            match seg {
                Segment::Key(key) if k == 0 => write!(f, "{key}")?,
                Segment::Key(key) => write!(f, ".{key}")?,
                Segment::Index(i) => write!(f, "[{i}]")?,
            }
        }
        Ok(())
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Scanner<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> Option<()> {
        (self.peek()? == byte).then(|| self.pos += 1)
    }

    fn string(&mut self) -> Option<String> {
        self.eat(b'"')?;
        let start = self.pos;
        let mut escaped = false;
        while let Some(&b) = self.bytes.get(self.pos) {
            self.pos += 1;
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => {
                    let raw = std::str::from_utf8(&self.bytes[start - 1..self.pos]).ok()?;
                    return serde_json::from_str(raw).ok();
                }
                _ => {}
            }
        }
        None
    }

    fn skip_value(&mut self) -> Option<()> {
        match self.peek()? {
            b'"' => self.string().map(|_| ()),
            b'[' => {
                self.pos += 1;
                if self.eat(b']').is_some() {
                    return Some(());
                }
                loop {
                    self.skip_value()?;
                    if self.eat(b']').is_some() {
                        return Some(());
                    }
                    self.eat(b',')?;
                }
            }
            b'{' => {
                self.pos += 1;
                if self.eat(b'}').is_some() {
                    return Some(());
                }
                loop {
                    self.string()?;
                    self.eat(b':')?;
                    self.skip_value()?;
                    if self.eat(b'}').is_some() {
                        return Some(());
                    }
                    self.eat(b',')?;
                }
            }
            _ => {
                while let Some(&b) = self.bytes.get(self.pos) {
                    if matches!(b, b',' | b']' | b'}') || b.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                Some(())
            }
        }
    }

    /// Leaves the scanner at the start of the value named by `path`.
    fn descend(&mut self, path: &[Segment]) -> Option<()> {
        let Some((first, rest)) = path.split_first() else {
            self.skip_ws();
            return Some(());
        };
        match first {
            Segment::Index(target) => {
                self.eat(b'[')?;
                for _ in 0..*target {
                    self.skip_value()?;
                    self.eat(b',')?;
                }
                self.descend(rest)
            }
            Segment::Key(target) => {
                self.eat(b'{')?;
                loop {
                    let key = self.string()?;
                    self.eat(b':')?;
                    if key == *target {
                        return self.descend(rest);
                    }
                    self.skip_value()?;
                    self.eat(b',')?;
                }
            }
        }
    }
}

/// One-based line and column of the value at `path`, if it exists.
pub fn locate(text: &str, path: &JsonPath) -> Option<(usize, usize)> {
    let mut scanner = Scanner {
        bytes: text.as_bytes(),
        pos: 0,
    };
    scanner.descend(path.segments())?;
    let before = &text[..scanner.pos];
    let line = before.matches('\n').count() + 1;
    let column = before[before.rfind('\n').map_or(0, |p| p + 1)..].chars().count() + 1;
    Some((line, column))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_display_compactly() {
        let p = JsonPath::root().key("members").index(2).key("outputs").index(0);
        assert_eq!(p.to_string(), "members[2].outputs[0]");
        assert_eq!(JsonPath::root().index(1).to_string(), "[1]");
    }

    #[test]
    fn locates_nested_values() {
        let text = "{\n  \"a\": \"x]\\\"}\",\n  \"members\": [\n    1,\n    {\"outputs\": [[1], [2]]}\n  ]\n}";
        let p = JsonPath::root().key("members").index(1).key("outputs").index(1);
        assert_eq!(locate(text, &p), Some((5, 23)));
        assert_eq!(locate(text, &JsonPath::root().key("members").index(0)), Some((4, 5)));
        assert_eq!(locate(text, &JsonPath::root()), Some((1, 1)));
        assert_eq!(locate(text, &JsonPath::root().key("missing")), None);
    }
}

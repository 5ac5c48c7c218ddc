//! Porter suffix-stripping stemmer (the original 1980 algorithm).
//!
//! Operates on lowercase ASCII words; anything containing other characters
//! (digits, non-ASCII) is returned unchanged, as are words of one or two
//! letters. [`stem_word`] runs the five steps once; callers that need a
//! guaranteed fixed point iterate (see `text::stem`).

/// One full pass of the Porter algorithm over an already-lowercased word.
pub fn stem_word(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|b| b.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut s = Stemmer {
        b: word.as_bytes().to_vec(),
    };
    s.step1a();
    s.step1b();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5a();
    s.step5b();
    String::from_utf8(s.b).expect("stemming preserves ASCII")
}

struct Stemmer {
    b: Vec<u8>,
}

impl Stemmer {
    /// A letter is a consonant unless it is a/e/i/o/u, or a `y` preceded by
    /// a consonant.
    fn is_consonant(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// The measure m of b[..len]: the number of vowel→consonant transitions
    /// in the form [C](VC)^m[V].
    fn measure(&self, len: usize) -> usize {
        let mut m = 0;
        let mut i = 0;
        // skip leading consonants
        while i < len && self.is_consonant(i) {
            i += 1;
        }
        loop {
            // skip vowels
            while i < len && !self.is_consonant(i) {
                i += 1;
            }
            if i == len {
                return m;
            }
            m += 1;
            while i < len && self.is_consonant(i) {
                i += 1;
            }
            if i == len {
                return m;
            }
        }
    }

    /// *v*: b[..len] contains a vowel.
    fn has_vowel(&self, len: usize) -> bool {
        (0..len).any(|i| !self.is_consonant(i))
    }

    /// *d: b[..len] ends with a double consonant.
    fn ends_double_consonant(&self, len: usize) -> bool {
        len >= 2 && self.b[len - 1] == self.b[len - 2] && self.is_consonant(len - 1)
    }

    /// *o: b[..len] ends consonant-vowel-consonant where the final consonant
    /// is not w, x, or y.
    fn ends_cvc(&self, len: usize) -> bool {
        len >= 3
            && self.is_consonant(len - 3)
            && !self.is_consonant(len - 2)
            && self.is_consonant(len - 1)
            && !matches!(self.b[len - 1], b'w' | b'x' | b'y')
    }

    fn ends_with(&self, suffix: &[u8]) -> bool {
        self.b.len() >= suffix.len() && self.b.ends_with(suffix)
    }

    fn stem_len(&self, suffix: &[u8]) -> usize {
        self.b.len() - suffix.len()
    }

    /// Replace `suffix` with `replacement` (the caller has checked the match).
    fn set_suffix(&mut self, suffix: &[u8], replacement: &[u8]) {
        let at = self.stem_len(suffix);
        self.b.truncate(at);
        self.b.extend_from_slice(replacement);
    }

    fn step1a(&mut self) {
        if self.ends_with(b"sses") {
            self.set_suffix(b"sses", b"ss");
        } else if self.ends_with(b"ies") {
            self.set_suffix(b"ies", b"i");
        } else if self.ends_with(b"ss") {
            // unchanged
        } else if self.ends_with(b"s") {
            self.set_suffix(b"s", b"");
        }
    }

    fn step1b(&mut self) {
        if self.ends_with(b"eed") {
            if self.measure(self.stem_len(b"eed")) > 0 {
                self.set_suffix(b"eed", b"ee");
            }
            return;
        }
        let removed = if self.ends_with(b"ed") && self.has_vowel(self.stem_len(b"ed")) {
            self.set_suffix(b"ed", b"");
            true
        } else if self.ends_with(b"ing") && self.has_vowel(self.stem_len(b"ing")) {
            self.set_suffix(b"ing", b"");
            true
        } else {
            false
        };
        if !removed {
            return;
        }
        if self.ends_with(b"at") {
            self.set_suffix(b"at", b"ate");
        } else if self.ends_with(b"bl") {
            self.set_suffix(b"bl", b"ble");
        } else if self.ends_with(b"iz") {
            self.set_suffix(b"iz", b"ize");
        } else if self.ends_double_consonant(self.b.len())
            && !matches!(self.b[self.b.len() - 1], b'l' | b's' | b'z')
        {
            self.b.truncate(self.b.len() - 1);
        } else if self.measure(self.b.len()) == 1 && self.ends_cvc(self.b.len()) {
            self.b.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if self.ends_with(b"y") && self.has_vowel(self.stem_len(b"y")) {
            let last = self.b.len() - 1;
            self.b[last] = b'i';
        }
    }

    /// Apply the first (longest) matching rule whose stem measure satisfies
    /// `min_m`; rule lists are ordered longest suffix first where prefixes
    /// overlap.
    fn apply_rules(&mut self, rules: &[(&[u8], &[u8])], min_m: usize) {
        for (suffix, replacement) in rules {
            if self.ends_with(suffix) {
                if self.measure(self.stem_len(suffix)) >= min_m {
                    self.set_suffix(suffix, replacement);
                }
                return;
            }
        }
    }

    fn step2(&mut self) {
        const RULES: &[(&[u8], &[u8])] = &[
            (b"ational", b"ate"),
            (b"tional", b"tion"),
            (b"enci", b"ence"),
            (b"anci", b"ance"),
            (b"izer", b"ize"),
            (b"abli", b"able"),
            (b"alli", b"al"),
            (b"entli", b"ent"),
            (b"ousli", b"ous"),
            (b"eli", b"e"),
            (b"ization", b"ize"),
            (b"ation", b"ate"),
            (b"ator", b"ate"),
            (b"alism", b"al"),
            (b"iveness", b"ive"),
            (b"fulness", b"ful"),
            (b"ousness", b"ous"),
            (b"aliti", b"al"),
            (b"iviti", b"ive"),
            (b"biliti", b"ble"),
        ];
        self.apply_rules(RULES, 1);
    }

    fn step3(&mut self) {
        const RULES: &[(&[u8], &[u8])] = &[
            (b"icate", b"ic"),
            (b"ative", b""),
            (b"alize", b"al"),
            (b"iciti", b"ic"),
            (b"ical", b"ic"),
            (b"ful", b""),
            (b"ness", b""),
        ];
        self.apply_rules(RULES, 1);
    }

    fn step4(&mut self) {
        const RULES: &[(&[u8], &[u8])] = &[
            (b"ement", b""),
            (b"ance", b""),
            (b"ence", b""),
            (b"able", b""),
            (b"ible", b""),
            (b"ment", b""),
            (b"ant", b""),
            (b"ent", b""),
            (b"ism", b""),
            (b"ate", b""),
            (b"iti", b""),
            (b"ous", b""),
            (b"ive", b""),
            (b"ize", b""),
            (b"al", b""),
            (b"er", b""),
            (b"ic", b""),
            (b"ou", b""),
        ];
        // ION is removed only when the remaining stem ends in s or t.
        if self.ends_with(b"ion") {
            let at = self.stem_len(b"ion");
            if at >= 1 && matches!(self.b[at - 1], b's' | b't') && self.measure(at) > 1 {
                self.b.truncate(at);
            }
            return;
        }
        self.apply_rules(RULES, 2);
    }

    fn step5a(&mut self) {
        if self.ends_with(b"e") {
            let at = self.stem_len(b"e");
            let m = self.measure(at);
            if m > 1 || (m == 1 && !self.ends_cvc(at)) {
                self.b.truncate(at);
            }
        }
    }

    fn step5b(&mut self) {
        let len = self.b.len();
        if self.measure(len) > 1 && self.ends_double_consonant(len) && self.b[len - 1] == b'l' {
            self.b.truncate(len - 1);
        }
    }
}

use super::BayesNet;

/// A table over a sorted set of variables, row-major with the last variable
/// varying fastest.
#[derive(Debug, Clone)]
pub(crate) struct Factor {
    pub(crate) vars: Vec<usize>,
    pub(crate) cards: Vec<usize>,
    pub(crate) values: Vec<f64>,
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

/// Advances a mixed-radix counter; returns false after wrapping to zero.
fn advance(counter: &mut [usize], cards: &[usize]) -> bool {
    for i in (0..counter.len()).rev() {
        counter[i] += 1;
        if counter[i] < cards[i] {
            return true;
        }
        counter[i] = 0;
    }
    false
}

impl Factor {
    pub(crate) fn scalar(value: f64) -> Self {
        Self {
            vars: Vec::new(),
            cards: Vec::new(),
            values: vec![value],
        }
    }

    /// The family factor of `var` with every observed variable fixed to its
    /// evidence state (and dropped from the scope).
    pub(crate) fn from_cpt(net: &BayesNet, var: usize, fixed: &[Option<usize>]) -> Self {
        let mut family: Vec<usize> = net.cpt(var).parents.clone();
        family.push(var);
        let mut vars: Vec<usize> = family.iter().copied().filter(|&v| fixed[v].is_none()).collect();
        vars.sort_unstable();
        vars.dedup();
        let cards: Vec<usize> = vars.iter().map(|&v| net.card(v)).collect();
        let size: usize = cards.iter().product();

        let mut assignment: Vec<usize> = fixed.iter().map(|s| s.unwrap_or(0)).collect();
        let mut counter = vec![0; vars.len()];
        let mut values = Vec::with_capacity(size);
        loop {
            for (&v, &s) in vars.iter().zip(&counter) {
                assignment[v] = s;
            }
            values.push(net.local_prob(var, &assignment));
            if !advance(&mut counter, &cards) {
                break;
            }
        }
        Self { vars, cards, values }
    }

    pub(crate) fn contains(&self, var: usize) -> bool {
        self.vars.binary_search(&var).is_ok()
    }

    pub(crate) fn product(&self, other: &Factor) -> Factor {
        let mut vars: Vec<usize> = self.vars.iter().chain(&other.vars).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        let cards: Vec<usize> = vars
            .iter()
            .map(|v| {
                self.card_of(*v)
                    .or_else(|| other.card_of(*v))
                    .expect("variable drawn from one of the operands")
            })
            .collect();
        let sa = self.strides_in(&vars);
        let sb = other.strides_in(&vars);
        let size: usize = cards.iter().product();

        let mut values = Vec::with_capacity(size);
        let mut counter = vec![0; vars.len()];
        let (mut ia, mut ib) = (0usize, 0usize);
        loop {
            values.push(self.values[ia] * other.values[ib]);
            // manual odometer so the operand offsets update incrementally
            let mut i = vars.len();
            let mut wrapped = true;
            while i > 0 {
                i -= 1;
                counter[i] += 1;
                ia += sa[i];
                ib += sb[i];
                if counter[i] < cards[i] {
                    wrapped = false;
                    break;
                }
                ia -= sa[i] * cards[i];
                ib -= sb[i] * cards[i];
                counter[i] = 0;
            }
            if wrapped {
                break;
            }
        }
        Factor { vars, cards, values }
    }

    pub(crate) fn sum_out(&self, var: usize) -> Factor {
        let Ok(pos) = self.vars.binary_search(&var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        vars.remove(pos);
        cards.remove(pos);
        let out_strides = strides(&cards);
        // stride of each input variable in the output (0 for the summed one)
        let mut map = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            map.push(match i.cmp(&pos) {
                std::cmp::Ordering::Less => out_strides[i],
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => out_strides[i - 1],
            });
        }
        let mut values = vec![0.0; cards.iter().product()];
        let mut counter = vec![0; self.vars.len()];
        let mut out = 0usize;
        for &v in &self.values {
            values[out] += v;
            let mut i = counter.len();
            while i > 0 {
                i -= 1;
                counter[i] += 1;
                out += map[i];
                if counter[i] < self.cards[i] {
                    break;
                }
                out -= map[i] * self.cards[i];
                counter[i] = 0;
            }
        }
        Factor { vars, cards, values }
    }

    fn card_of(&self, var: usize) -> Option<usize> {
        self.vars.binary_search(&var).ok().map(|i| self.cards[i])
    }

    /// Strides of this factor's variables laid out along `scope` (0 where
    /// the variable is absent from this factor).
    fn strides_in(&self, scope: &[usize]) -> Vec<usize> {
        let own = strides(&self.cards);
        scope
            .iter()
            .map(|v| self.vars.binary_search(v).map(|i| own[i]).unwrap_or(0))
            .collect()
    }
}

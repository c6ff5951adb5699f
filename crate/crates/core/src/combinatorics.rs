/// All vectors of length `parts` summing to `total`, in ascending
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<u64>>,
}

impl Compositions {
    pub fn new(total: u64, parts: usize) -> Self {
        let current = if parts == 0 {
            (total == 0).then(Vec::new)
        } else {
            let mut v = vec![0; parts];
            v[parts - 1] = total;
            Some(v)
        };
        Compositions { current }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.take()?;
        let d = out.len();
        let mut next = out.clone();
        let mut suffix = 0u64;
        // rightmost i < d-1 whose suffix carries mass
        for i in (0..d.saturating_sub(1)).rev() {
            suffix += next[i + 1];
            if suffix > 0 {
                next[i] += 1;
                for x in next.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                next[d - 1] = suffix - 1;
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Number of compositions of `total` into `parts` parts, saturating.
pub fn composition_count(total: u64, parts: usize) -> u64 {
    if parts == 0 {
        return u64::from(total == 0);
    }
    // C(total + parts - 1, parts - 1)
    let k = (parts - 1) as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(total + k - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f` on every element of the cartesian product of `choices`.
/// Stops early when `f` returns `false`.
pub fn for_each_product<T, F>(choices: &[Vec<T>], mut f: F)
where
    F: FnMut(&[&T]) -> bool,
{
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut picked: Vec<&T> = choices.iter().map(|c| &c[0]).collect();
    loop {
        if !f(&picked) {
            return;
        }
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                picked[pos] = &choices[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            picked[pos] = &choices[pos][0];
        }
    }
}

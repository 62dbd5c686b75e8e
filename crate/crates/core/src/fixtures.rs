//! The worked example used throughout the test suites: one sentence, its AMR
//! graph rooted at `know`, and the graph linearized from two other foci.

pub const SENTENCE: &str =
    "I know for them to approve this price, they'll need statistical documentation.";

/// The parse of [`SENTENCE`], focused on `know`.
pub const KNOW_ROOTED: &str = "(z1 / know
    :ARG0 (z2 / i)
    :ARG1 (z3 / need
        :ARG0 (z4 / they)
        :ARG1 (z5 / documentation
            :mod (z6 / statistic))
        :purpose (z7 / approve
            :ARG0 z4
            :ARG1 (z8 / thing
                :ARG2-of (z9 / price)
                :mod (z10 / this)))))";

/// The same graph re-rooted at `need` (z3).
pub const NEED_FOCUS: &str = "(z3 / need
  :ARG1-of (z1 / know
    :ARG0 (z2 / i))
  :ARG0 (z4 / they)
  :ARG1 (z5 / documentation
    :mod (z6 / statistic))
  :purpose (z7 / approve
    :ARG0 z4
    :ARG1 (z8 / thing
      :ARG2-of (z9 / price)
      :mod (z10 / this))))";

/// The same graph re-rooted at `they` (z4).
pub const THEY_FOCUS: &str = "(z4 / they
  :ARG0-of (z3 / need
    :ARG1 (z5 / documentation
      :mod (z6 / statistic))
    :purpose (z7 / approve
      :ARG0 z4
      :ARG1 (z8 / thing
        :ARG2-of (z9 / price)
        :mod (z10 / this)))
    :ARG1-of (z1 / know
      :ARG0 (z2 / i))))";

//! Small named games used throughout the test suites and by the CLI.

use crate::game::Game;

/// Prisoner's dilemma: C,D × C,D with (3,3) (0,5) (5,0) (1,1).
pub fn pd() -> Game {
    Game::bimatrix(&["C", "D"], &["C", "D"], &[vec![(3, 3), (0, 5)], vec![(5, 0), (1, 1)]]).expect("valid game")
}

/// Rows T, M, B against columns L, R with row payoffs T:(3,0), M:(0,3),
/// B:(1,1). B is strictly dominated by ½T+½M but by no pure row. The column
/// player is indifferent in aggregate and never eliminates anything.
pub fn three_by_two() -> Game {
    Game::bimatrix(
        &["T", "M", "B"],
        &["L", "R"],
        &[vec![(3, 1), (0, 0)], vec![(0, 0), (3, 1)], vec![(1, 0), (1, 0)]],
    )
    .expect("valid game")
}

/// The U,D × L,R game underlying the two-state non-standard model in which
/// non-proper announcements empty the model.
pub fn fig2() -> Game {
    Game::bimatrix(&["U", "D"], &["L", "R"], &[vec![(1, 1), (0, 0)], vec![(0, 0), (1, 1)]]).expect("valid game")
}

/// Row a ties row b on L and loses on R, so b weakly dominates a on the full
/// game but not once R is removed: wd_g is not monotonic here.
pub fn wd_nonmonotonic() -> Game {
    Game::bimatrix(&["a", "b"], &["L", "R"], &[vec![(1, 0), (0, 0)], vec![(1, 0), (1, 0)]]).expect("valid game")
}

# counts up to 10, then back down to 0, forever
system updown
state x : int;
state up : bool;
init: x = 0 && up;
trans: (up && x < 10 && x' = x + 1 && up')
    || (up && x >= 10 && x' = x - 1 && !up')
    || (!up && x > 0 && x' = x - 1 && !up')
    || (!up && x <= 0 && x' = x + 1 && up');
predicate: x >= 0;
predicate: x <= 10;
predicate: x <= 9;
predicate: x = 10;
predicate: up;
predicate: !up;

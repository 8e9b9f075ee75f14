# while (i < a) { b = random(); if (b) i = i + 1; }   with precondition i = 0, a >= 1
system loop
state i, a : int;
state b : bool;
init: i = 0 && a >= 1;
guard: i < a;
# a is not assigned, so it keeps its value
trans: (b' && i' = i + 1) || (!b' && i' = i);
predicate: i = 0;
predicate: i < 0;
predicate: i > 0;
predicate: i = a;
predicate: i < a;
predicate: i > a;
predicate: b;
predicate: !b;

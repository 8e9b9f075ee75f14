# real-valued ramp in steps of 1/2, reset once it reaches 1
system sawtooth
state x : real;
init: x = 0;
trans: (x < 1 && x' = x + 0.5) || (x >= 1 && x' = 0);
predicate: x = 0;
predicate: x >= 0;
predicate: x <= 1;
predicate: x < 1;
predicate: x = 1;

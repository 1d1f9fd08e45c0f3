class Counter {
  var n: int

  constructor ()
  {
    n := 0;
  }

  method Bump() returns (c: Counter)
  modifies this
  {
    n := n + 1;
    c := this;
  }
}

method Main()
{
  var c := new Counter();
  var d := c.Bump();
  print d.n, "\n";
}

class Widget {
  constructor ()
  {
  }
}

method Collections() returns (n: int)
{
  var xs := [1, 2, 3];
  var ys: set<int> := {4, 5};
  var ms := multiset{1, 1, 2};
  var mp := map[1 := "a", 2 := "b"];
  var w: Widget? := new Widget();
  var v: Widget := new Widget();
  n := |xs|;
}

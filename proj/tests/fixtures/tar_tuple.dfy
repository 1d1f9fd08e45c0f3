method UseTuple() returns (first: int)
{
  var t := (10, 20, false);
  first := t.0;
}

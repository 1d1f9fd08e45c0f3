class Account {
  var balance: int

  constructor (balance: int)
  {
    this.balance := balance;
  }

  method Deposit(balance: int)
  modifies this
  {
    this.balance := this.balance + balance;
  }
}

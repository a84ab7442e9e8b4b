// Simple account
package bank;

public class Account {
    private long balance;

    /* deposit money */
    public void deposit(long amount) {
        if (amount <= 0) {
            throw new IllegalArgumentException("bad");
        }
        balance += amount;
    }

    public boolean canWithdraw(long amount) {
        return amount > 0 && amount <= balance;
    }

    public long balance() { return balance; }
}

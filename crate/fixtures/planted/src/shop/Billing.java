package shop;

public class Billing {
    public double invoiceTotal(Order order, double rate) {
        double total = 0;
        Invoice invoice = ledger.open(order.id());
        total = computeTotal(order.items(), rate);
        invoice.setAmount(total);
        audit.record(invoice);
        return total;
    }

    public void sendInvoice(Invoice invoice) {
        Mailer mailer = Mailer.connect(smtpHost);
        mailer.attach(invoice.render());
        log.info("invoice sent " + invoice.id());
        mailer.close();
    }

    public double refundAmount(Payment payment) {
        double paid = payment.amount();
        double fee = paid * refundFeeRatio;
        if (payment.isDisputed())
            return 0;
        return paid - fee;
    }

    public void applyCredit(Account account, double credit) {
        double balance = account.balance();
        balance = balance + credit;
        account.setBalance(balance);
        history.append(account.id(), credit);
        notifier.balanceChanged(account);
    }

    public Invoice reissue(Invoice old) {
        Invoice copy = old.duplicate();
        copy.setNumber(sequence.next());
        copy.setIssuedAt(clock.now());
        ledger.store(copy);
        return copy;
    }
}

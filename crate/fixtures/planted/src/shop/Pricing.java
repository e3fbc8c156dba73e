package shop;

public class Pricing {
    public BigDecimal unitPrice(BigDecimal base, BigDecimal factor) {
        BigDecimal price = BigDecimal.ZERO;
        price = base.multiply(factor).setScale(2);
        cache.put(base, price);
        return price;
    }

    public BigDecimal listPrice(BigDecimal base, BigDecimal factor) {
        BigDecimal price = cache.get(base);
        price = base.multiply(factor).setScale(2, RoundingMode.HALF_UP);
        return price;
    }

    public void checkout(Cart cart) {
        if (cart.isEmpty())
            throw new IllegalStateException("empty cart");
        Order order = orders.create(cart);
        payments.charge(order);
        cart.clear();
    }

    public void validate(Cart cart) {
        if (cart.items().isEmpty())
            throw new IllegalArgumentException("empty cart");
        rules.check(cart);
    }

    public double discountedTotal(Order order, double rate, double discount) {
        double total = 0;
        total = computeTotal(order.items(), rate, discount);
        total = Math.max(total, minimumCharge);
        return total;
    }

    public double estimate(Order order, double rate) {
        double total = 0;
        total = computeTotal(order.items(), rate);
        return total * estimateMargin;
    }
}
